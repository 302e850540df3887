#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conslaw/problem.hpp"

namespace conslaw {

/// Uniform cell grid over [x_lo, x_hi].
struct GridSpec {
  int n_cells = 0;
  double x_lo = 0.0;
  double x_hi = 0.0;

  double dx() const { return (x_hi - x_lo) / n_cells; }
  double center(int j) const { return x_lo + (j + 0.5) * dx(); }

  static GridSpec covering(Interval domain, int n_cells);
  bool operator==(const GridSpec&) const = default;
};

enum class BoundaryMode { godunov_bln };

struct SolverConfig {
  double cfl = 0.9;
  std::vector<double> record_times;  // sorted, unique, inside [0, T]
  BoundaryMode boundary_mode = BoundaryMode::godunov_bln;
};

/// One accepted time step: start time, size, and the boundary fluxes that
/// acted during it (cars per second, positive into the domain on the left and
/// out of it on the right).
struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double influx = 0.0;
  double outflux = 0.0;
};

/// Discrete solution: cell-average profiles at the requested times plus the
/// per-step diagnostics needed for mass accounting.
struct SolutionField {
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<double>> profiles;
  std::vector<StepRecord> steps;

  double dx() const { return grid.dx(); }
  double mass_at(std::size_t i) const;
  double influx_total() const;
  double outflux_total() const;
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lax-Friedrichs two-point flux for f = v_t * g at one interface.
double lax_friedrichs_flux(double u_left, double u_right, double v_t,
                           const FluxModel& g, double dt, double dx);

/// Godunov two-point flux for the flux u -> v_t * g(u):
/// min of the flux over [u_left, u_right], or max over [u_right, u_left].
double godunov_flux(double u_left, double u_right, double v_t, const FluxModel& g);

enum class Side { left, right };

/// Boundary flux realizing the boundary condition in the sense of its
/// relaxed (Godunov) form: the datum acts as the exterior state of a Riemann
/// problem against the interior trace. A wall datum yields zero flux; a free
/// datum equal to the trace yields v_t * g(trace).
double bln_boundary_flux(Side side, double interior_trace, double boundary_datum,
                         double v_t, const FluxModel& g);

/// Conservation-form update with caller-supplied outermost fluxes; interior
/// interfaces use the Lax-Friedrichs flux.
void conservative_step(std::span<const double> u, std::span<double> out,
                       double v_t, const FluxModel& g, double dt, double dx,
                       double left_flux, double right_flux);

/// Classical Lax-Friedrichs step with ghost values supplying the stencil at
/// both ends: out_j = (u_{j-1} + u_{j+1}) / 2 - dt/(2 dx) v_t (g_{j+1} - g_{j-1}).
/// Throws CflError when dt * v_t * ||g'|| / dx exceeds 1 on the current range.
std::vector<double> lax_friedrichs_step(std::span<const double> u, double v_t,
                                        const FluxModel& g, double dt, double dx,
                                        double left_ghost, double right_ghost);

/// March the problem from 0 to T. Time steps follow the local CFL bound
/// cfl * dx / (v(t) * ||g'||) and are clipped so that no step straddles a
/// breakpoint of v or of the boundary data and every requested record time is
/// hit exactly.
SolutionField solve(const IBVPProblem& problem, const GridSpec& grid,
                    const SolverConfig& config);

/// Alternative route: rescale time by tau = integral of v, solve the
/// autonomous problem with unit speed and transformed boundary data, and map
/// the records back. Agrees with solve() up to discretization error.
SolutionField solve_via_time_rescaling(const IBVPProblem& problem,
                                       const GridSpec& grid,
                                       const SolverConfig& config);

/// Discrete L1 norm of the difference of two profiles on a common grid.
double l1_profile_distance(std::span<const double> a, std::span<const double> b,
                           double dx);

/// Variation of the cellwise-constant reconstruction (interior jumps).
double profile_total_variation(std::span<const double> u);

}  // namespace conslaw
