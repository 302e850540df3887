#pragma once

#include <optional>
#include <span>

#include "conslaw/flux_model.hpp"
#include "conslaw/speed_profile.hpp"
#include "conslaw/step_function.hpp"

namespace conslaw {

enum class DomainKind { segment, half_line };

/// Smallest closed interval containing the range of the initial datum and the
/// ranges of all time data restricted to [0, t]. For t == 0 the time data
/// contribute their right traces at 0.
Interval data_hull(const StepFunction& initial,
                   std::span<const StepFunction* const> time_data, double t);

/// Initial-boundary value problem for u_t + (v(t) g(u))_x = 0 on [0, L]
/// (segment: boundary data on both sides) or on a truncated half line
/// [0, X_max] (boundary data on the left, free outflow on the right).
///
/// The horizon T is the common domain endpoint of the speed profile and the
/// boundary data. All density data must lie inside the flux working interval.
class IBVPProblem {
 public:
  static IBVPProblem segment(StepFunction initial, StepFunction left_data,
                             StepFunction right_data, SpeedProfile speed,
                             FluxModel flux);

  /// `initial` may be given on [0, x] with x <= x_max; it is extended by zero.
  /// x_max must exceed the support of the initial datum by at least
  /// sup(v) * ||g'|| * T, so that nothing reaches the truncation edge.
  static IBVPProblem half_line(StepFunction initial, StepFunction left_data,
                               SpeedProfile speed, FluxModel flux, double x_max);

  DomainKind kind() const { return kind_; }
  double horizon() const { return speed_.horizon(); }
  Interval space_domain() const { return initial_.domain(); }

  const StepFunction& initial() const { return initial_; }
  const StepFunction& left_data() const { return left_; }
  const StepFunction& right_data() const;  // segment only
  const SpeedProfile& speed() const { return speed_; }
  const FluxModel& flux() const { return flux_; }

  /// Data hull at window [0, t].
  Interval hull(double t) const;

  /// Total-variation functional bounding TV of the solution at time t:
  /// TV(initial) plus the variation of each boundary datum over [0, t] plus
  /// the compatibility jumps between boundary traces and the initial datum.
  /// Nondecreasing in t.
  double tv_functional(double t) const;

  /// sup(v) * ||g'|| over the full-horizon hull: bounds every wave speed.
  double max_wave_speed() const;

 private:
  IBVPProblem(DomainKind kind, StepFunction initial, StepFunction left,
              std::optional<StepFunction> right, SpeedProfile speed,
              FluxModel flux);

  DomainKind kind_;
  StepFunction initial_;
  StepFunction left_;
  std::optional<StepFunction> right_;
  SpeedProfile speed_;
  FluxModel flux_;
};

/// Both sides of the translation estimate
///   integral over [0, y] of |u(x + phi(x)) - u(x)| dx
///     <= sup of phi on [0, y] * TV(u; [0, y]).
/// The left side is integrated exactly; u is extended constantly beyond its
/// domain. The estimate requires the variation u can reach under the
/// translation to live inside [0, y]; callers keep u constant beyond y.
struct TranslationBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
TranslationBound bv_translation_bound(const StepFunction& u,
                                      const StepFunction& phi, double y);

}  // namespace conslaw
