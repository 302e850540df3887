#pragma once

#include <functional>

#include "conslaw/interval.hpp"

namespace conslaw {

/// Density-dependent factor g of the flux v(t) * g(u), together with its
/// derivative and a working density interval.
///
/// Interval queries (derivative sup, min, max) default to dense sampling and
/// are therefore lower bounds for max-type and upper bounds for min-type
/// queries on wild fluxes; models with closed forms (see LWRFlux) install
/// exact versions through the Extrema hooks.
class FluxModel {
 public:
  using Fn = std::function<double(double)>;
  struct Extrema {
    std::function<double(Interval)> derivative_sup;
    std::function<double(Interval)> min;
    std::function<double(Interval)> max;
  };

  FluxModel(Fn g, Fn dg, Interval working);
  FluxModel(Fn g, Fn dg, Interval working, Extrema exact);

  double operator()(double u) const { return g_(u); }
  double derivative(double u) const { return dg_(u); }
  Interval working_interval() const { return working_; }

  /// sup of |g'| over the interval: the Lipschitz constant of g there.
  double derivative_sup(Interval u) const { return extrema_.derivative_sup(u); }
  double min_on(Interval u) const { return extrema_.min(u); }
  double max_on(Interval u) const { return extrema_.max(u); }

  /// Largest relative mismatch between derivative() and a central difference
  /// of the flux across the working interval. Small values certify that the
  /// two callables describe the same function.
  double derivative_consistency_error(int samples = 257) const;

 private:
  Fn g_, dg_;
  Interval working_;
  Extrema extrema_;
};

/// LWR traffic flux g(u) = u (1 - u/R) on [0, R]; g' is linear, so all
/// interval queries are exact.
class LWRFlux : public FluxModel {
 public:
  explicit LWRFlux(double max_density);

  double max_density() const { return max_density_; }

  /// Largest sustainable flow at speed factor v: v * g(R/2) = v R / 4.
  double capacity(double speed) const { return speed * max_density_ / 4.0; }

  /// Density u <= R/2 with v * g(u) = inflow. Throws std::domain_error when
  /// the inflow exceeds capacity beyond a 1e-9 relative tolerance.
  double subcritical_density(double inflow, double speed) const;

 private:
  double max_density_;
};

}  // namespace conslaw
