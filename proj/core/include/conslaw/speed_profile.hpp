#pragma once

#include <vector>

#include "conslaw/step_function.hpp"

namespace conslaw {

class MollifiedSpeed;

/// Time profile of the speed factor multiplying the flux: a piecewise-constant
/// function on [0, T] bounded below by a strictly positive floor.
///
/// The profile also carries its own time rescaling. With
///   tau(t) = integral of v over [0, t]
/// the map t -> tau is a strictly increasing bijection of [0, T] onto
/// [0, tau(T)]; both directions are evaluated exactly from cumulative sums.
class SpeedProfile {
 public:
  SpeedProfile(StepFunction steps, double floor);
  static SpeedProfile constant(double value, double horizon);

  const StepFunction& steps() const { return steps_; }
  double horizon() const { return steps_.domain_hi(); }
  double floor() const { return floor_; }

  double operator()(double t) const { return steps_(t); }

  /// Essential sup over [0, horizon].
  double sup() const;
  /// Essential sup over [0, t].
  double sup_on(double t) const;

  /// Length of the rescaled time axis, i.e. the integral of v over [0, T].
  double rescaled_horizon() const { return cumulative_.back(); }

  /// t -> tau: integral of v over [0, t]. Strictly increasing, Lipschitz with
  /// constant sup(), and inverse of from_rescaled_time up to rounding.
  double to_rescaled_time(double t) const;

  /// tau -> t, the inverse map.
  double from_rescaled_time(double tau) const;

  /// Exact L1 distance to another profile over [0, t]. Both horizons must
  /// reach t; otherwise this is a domain error.
  double l1_distance(const SpeedProfile& other, double t) const;

  /// Smooth approximation of order n (kernel support width 1/n).
  MollifiedSpeed mollified(int n) const;

  bool operator==(const SpeedProfile&) const = default;

 private:
  StepFunction steps_;
  double floor_;
  std::vector<double> cumulative_;  // integral of v up to each edge
};

/// Smooth speed profile obtained by mollification.
///
/// The profile is extended by its floor value outside [0, T] and convolved
/// with the unit-mass kernel 140 (n z (1 - n z))^3 supported on [0, 1/n].
/// Because the kernel is polynomial and the profile piecewise constant, the
/// convolution is evaluated in closed form; values stay inside
/// [floor, sup] for every order n.
class MollifiedSpeed {
 public:
  MollifiedSpeed(const SpeedProfile& base, int order);

  int order() const { return order_; }
  double horizon() const { return base_steps_.domain_hi(); }

  double operator()(double t) const;

  /// Dense sampling back onto a step profile (piece width <= resolution),
  /// each piece holding the exact mollified value at its midpoint.
  SpeedProfile sampled(double resolution = 1e-3) const;

 private:
  StepFunction base_steps_;
  double floor_;
  double sup_;
  int order_;
};

}  // namespace conslaw
