#pragma once

#include <vector>

#include "conslaw/solver.hpp"

namespace conslaw {

enum class LightColor { green, red };

/// Periodic two-phase traffic light. The initial phase ends at `first_switch`
/// (it may be a partial phase); afterwards full green and red phases
/// alternate. color(t) is right-continuous: the new phase owns its start.
class LightSchedule {
 public:
  LightSchedule(LightColor initial, double first_switch, double green_s,
                double red_s);

  LightColor color(double t) const;
  LightColor initial() const { return initial_; }
  double first_switch() const { return first_switch_; }
  double green_s() const { return green_s_; }
  double red_s() const { return red_s_; }
  double cycle() const { return green_s_ + red_s_; }

  /// All switch instants in (0, horizon), increasing.
  std::vector<double> switch_times(double horizon) const;

 private:
  LightColor initial_;
  double first_switch_;
  double green_s_;
  double red_s_;
};

/// Signalized road segment with a speed limit enforced while the exit light
/// is red. All quantities in SI units (m, s, cars/m, cars/s).
struct TrafficScenario {
  double road_length = 250.0;
  double max_density = 0.2;
  double inflow_rate = 2000.0 / 3600.0;
  double green_speed = 60.0 / 3.6;
  double red_speed = 40.0 / 3.6;  // enforced during exit red

  LightSchedule entry{LightColor::green, 39.0, 39.0, 27.0};
  LightSchedule exit{LightColor::green, 12.0, 30.0, 45.0};

  double inflow_cycles = 3.0;  // demand lasts this many entry cycles
  double horizon = 1200.0;
  double queue_window = 100.0;  // congestion is measured on [L - window, L]
  double record_dt = 0.5;       // time quadrature step of the functional

  double inflow_end() const { return inflow_cycles * entry.cycle(); }
};

/// Congestion weight: 0 below 0.75 R, 1 above 0.85 R, linear in between.
double queue_weight(double density, double max_density);

/// Subcritical density carrying `inflow` at speed factor `speed`.
double inflow_boundary_density(double inflow, double speed, const LWRFlux& flux);

/// Assembles the scenario as an initial-boundary value problem: empty road,
/// inflow density on the left while the entry light is green and demand
/// lasts, full-density wall on the right while the exit light is red, speed
/// dropping to red_speed while the exit light is red. Throws
/// std::domain_error when the red-phase speed cannot carry the inflow.
IBVPProblem build_problem(const TrafficScenario& scenario);

struct TrafficRun {
  IBVPProblem problem;
  SolutionField field;
};

/// Solves the scenario, recording profiles at the midpoint times
/// (i + 1/2) record_dt used by the congestion functional.
TrafficRun run_scenario(const TrafficScenario& scenario, int n_cells,
                        double cfl = 0.9);

/// Time-space integral of queue_weight(u) over [0, T] x [L - window, L],
/// midpoint rule in time over the recorded profiles, exact in x.
double queue_functional(const SolutionField& field, const TrafficScenario& scenario);

struct SweepRow {
  double red_speed_kmh = 0.0;
  double congestion = 0.0;       // queue functional J
  double total_discharge = 0.0;  // cars that left through the exit
  double emptying_time = 0.0;    // first time after the demand ends with an
                                 // empty road (horizon if never empty)
};

/// Runs the scenario once per candidate red-phase speed limit (km/h).
std::vector<SweepRow> sweep_speed_limits(const TrafficScenario& base,
                                         const std::vector<double>& speeds_kmh,
                                         int n_cells, double cfl = 0.9);

}  // namespace conslaw
