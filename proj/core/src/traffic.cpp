#include "conslaw/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conslaw {

LightSchedule::LightSchedule(LightColor initial, double first_switch,
                             double green_s, double red_s)
    : initial_(initial), first_switch_(first_switch), green_s_(green_s),
      red_s_(red_s) {
  if (!(first_switch > 0.0) || !(green_s > 0.0) || !(red_s > 0.0))
    throw std::invalid_argument("LightSchedule: durations must be positive");
}

LightColor LightSchedule::color(double t) const {
  if (t < first_switch_) return initial_;
  LightColor c = initial_;
  double next = first_switch_;
  while (t >= next) {
    c = c == LightColor::green ? LightColor::red : LightColor::green;
    next += c == LightColor::green ? green_s_ : red_s_;
  }
  return c;
}

std::vector<double> LightSchedule::switch_times(double horizon) const {
  std::vector<double> times;
  LightColor c = initial_;
  double next = first_switch_;
  while (next < horizon) {
    times.push_back(next);
    c = c == LightColor::green ? LightColor::red : LightColor::green;
    next += c == LightColor::green ? green_s_ : red_s_;
  }
  return times;
}

double queue_weight(double density, double max_density) {
  const double r = density / max_density;
  if (r <= 0.75) return 0.0;
  if (r >= 0.85) return 1.0;
  return 10.0 * r - 7.5;
}

double inflow_boundary_density(double inflow, double speed, const LWRFlux& flux) {
  return flux.subcritical_density(inflow, speed);
}

IBVPProblem build_problem(const TrafficScenario& sc) {
  if (!(sc.horizon > 0.0) || !(sc.road_length > 0.0) || !(sc.max_density > 0.0))
    throw std::invalid_argument("TrafficScenario: bad geometry");
  if (!(sc.green_speed > 0.0) || !(sc.red_speed > 0.0))
    throw std::invalid_argument("TrafficScenario: speeds must be positive");

  LWRFlux flux(sc.max_density);

  // Event times where the speed or either boundary datum may jump.
  std::vector<double> events;
  for (double t : sc.entry.switch_times(sc.horizon)) events.push_back(t);
  for (double t : sc.exit.switch_times(sc.horizon)) events.push_back(t);
  if (sc.inflow_end() < sc.horizon) events.push_back(sc.inflow_end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::vector<double> speed_values;
  std::vector<double> left_values;
  std::vector<double> right_values;
  double start = 0.0;
  for (std::size_t i = 0; i <= events.size(); ++i) {
    const bool exit_red = sc.exit.color(start) == LightColor::red;
    const double v = exit_red ? sc.red_speed : sc.green_speed;
    const bool feeding = sc.entry.color(start) == LightColor::green &&
                         start < sc.inflow_end();
    speed_values.push_back(v);
    left_values.push_back(
        feeding ? inflow_boundary_density(sc.inflow_rate, v, flux) : 0.0);
    right_values.push_back(exit_red ? sc.max_density : 0.0);
    if (i < events.size()) start = events[i];
  }

  SpeedProfile speed(StepFunction(0.0, sc.horizon, events, speed_values),
                     std::min(sc.green_speed, sc.red_speed));
  StepFunction left(0.0, sc.horizon, events, left_values);
  StepFunction right(0.0, sc.horizon, std::move(events), right_values);
  StepFunction initial(0.0, sc.road_length, 0.0);

  return IBVPProblem::segment(std::move(initial), std::move(left),
                              std::move(right), std::move(speed),
                              std::move(flux));
}

TrafficRun run_scenario(const TrafficScenario& sc, int n_cells, double cfl) {
  IBVPProblem problem = build_problem(sc);

  SolverConfig config;
  config.cfl = cfl;
  const int samples = static_cast<int>(std::floor(sc.horizon / sc.record_dt));
  config.record_times.reserve(samples);
  for (int i = 0; i < samples; ++i)
    config.record_times.push_back((i + 0.5) * sc.record_dt);

  GridSpec grid = GridSpec::covering(problem.space_domain(), n_cells);
  SolutionField field = solve(problem, grid, config);
  return {std::move(problem), std::move(field)};
}

double queue_functional(const SolutionField& field, const TrafficScenario& sc) {
  const double window_lo = sc.road_length - sc.queue_window;
  const double dx = field.dx();
  double total = 0.0;
  for (const auto& profile : field.profiles) {
    double integrand = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
      const double lo = std::max(field.grid.x_lo + j * dx, window_lo);
      const double hi = field.grid.x_lo + (j + 1) * dx;
      if (hi <= lo) continue;
      integrand += (hi - lo) * queue_weight(profile[j], sc.max_density);
    }
    total += integrand * sc.record_dt;
  }
  return total;
}

namespace {

double emptying_time(const SolutionField& field, const TrafficScenario& sc) {
  // The road starts empty, so its mass is the running net boundary transfer.
  double mass = 0.0;
  for (const StepRecord& r : field.steps) {
    mass += (r.influx - r.outflux) * r.dt;
    const double end = r.t + r.dt;
    if (end >= sc.inflow_end() && mass < 1e-3) return end;
  }
  return sc.horizon;
}

}  // namespace

std::vector<SweepRow> sweep_speed_limits(const TrafficScenario& base,
                                         const std::vector<double>& speeds_kmh,
                                         int n_cells, double cfl) {
  std::vector<SweepRow> rows;
  rows.reserve(speeds_kmh.size());
  for (double kmh : speeds_kmh) {
    TrafficScenario sc = base;
    sc.red_speed = kmh / 3.6;
    TrafficRun run = run_scenario(sc, n_cells, cfl);
    SweepRow row;
    row.red_speed_kmh = kmh;
    row.congestion = queue_functional(run.field, sc);
    row.total_discharge = run.field.outflux_total();
    row.emptying_time = emptying_time(run.field, sc);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace conslaw
