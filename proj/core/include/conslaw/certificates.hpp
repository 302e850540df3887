#pragma once

#include <string>
#include <vector>

#include "conslaw/solver.hpp"

namespace conslaw {

/// Constants entering the flux-perturbation stability estimate.
///   V    smaller of the two speed sups on [0, t]
///   G    smaller of the two Lipschitz bounds of g on the data hull
///   A  = max(1, G) * V        (weights the g' gap, linearly in t)
///   B  = (1 + V / floor) * G  (weights the L1 speed gap)
struct StabilityConstants {
  double V = 0.0;
  double G = 0.0;
  double A = 0.0;
  double B = 0.0;
  double floor = 0.0;
};

/// Bound on ||u - u~||_L1 at time t for two problems sharing their data but
/// differing in flux (speed profile and/or g):
///   tv(t) * (A * t * sup|g' - g~'| + B * ||v - v~||_{L1([0,t])}).
struct StabilityBound {
  StabilityConstants constants;
  double tv = 0.0;
  double derivative_gap = 0.0;  // sup over the hull of |g' - g~'|
  double speed_gap = 0.0;       // L1 distance of the speed profiles on [0, t]
  double t = 0.0;
  double value = 0.0;
};

StabilityBound flux_stability_bound(const IBVPProblem& p, const IBVPProblem& q,
                                    double t);

/// Bound on ||u - u~||_L1 at time t for two problems sharing their flux but
/// differing in data: L1 distance of the initial data plus, per boundary,
/// sup(v) * ||g'|| times the L1 distance of the boundary data over [0, t].
/// The Lipschitz bound of g is taken on the hull of the boundary data alone.
double data_stability_bound(const StepFunction& initial_a,
                            const StepFunction& initial_b,
                            const StepFunction& left_a, const StepFunction& left_b,
                            const SpeedProfile& v, const FluxModel& g, double t);

double data_stability_bound_segment(
    const StepFunction& initial_a, const StepFunction& initial_b,
    const StepFunction& left_a, const StepFunction& left_b,
    const StepFunction& right_a, const StepFunction& right_b,
    const SpeedProfile& v, const FluxModel& g, double t);

/// One machine-checkable certificate: pass iff empirical <= bound, with
/// margin = bound - empirical.
struct CertificateReport {
  std::string check;
  double bound = 0.0;
  double empirical = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// Discretization allowances added to the exact-solution bounds. Calibrate by
/// comparing a refinement pair: an excess that shrinks under refinement is
/// discretization error, a persistent one is a genuine violation.
struct CertificateAllowances {
  double hull_tolerance = 1e-12;  // relative to max(1, hull width)
  double tv_excess = 0.0;
  double l1_time_excess = 0.0;
  double mass_tolerance = 1e-10;  // relative to total throughput
};

/// Certificates for a recorded run:
///  - range: every recorded value lies in the data hull of its own window
///  - tv: profile variation <= tv functional of the window
///  - l1_time: ||u(t_i) - u(t_{i+1})||_L1 <= tv * sup(v) * ||g'|| * |t_i - t_{i+1}|
///  - mass: |mass change - net boundary transfer| <= tolerance * throughput
std::vector<CertificateReport> run_certificates(const SolutionField& field,
                                                const IBVPProblem& problem,
                                                const CertificateAllowances& allow);

struct EntropyCheckConfig {
  int k_count = 17;        // density levels spanning the inflated hull
  int tiles_t = 4;         // test-function tiling in time
  int tiles_x = 4;         // and in space
  double hull_inflation = 0.05;
  double tolerance = 0.0;  // pass iff min residual >= -tolerance
};

/// Residual of one entropy inequality: nonnegative for entropy solutions.
struct EntropyResidual {
  double k = 0.0;
  int tile_t = 0;
  int tile_x = 0;
  int sign = +1;  // +1: positive-part branch, -1: negative-part branch
  double value = 0.0;
};

/// Evaluates the boundary-aware entropy inequalities of the recorded field
/// against every sampled level k and every test bump in a tiling that
/// overlaps the domain edges (so the boundary terms are exercised). The field
/// must record t = 0 and t = T.
std::vector<EntropyResidual> entropy_residuals(const SolutionField& field,
                                               const IBVPProblem& problem,
                                               const EntropyCheckConfig& config);

CertificateReport check_entropy_inequality(const SolutionField& field,
                                           const IBVPProblem& problem,
                                           const EntropyCheckConfig& config);

}  // namespace conslaw
