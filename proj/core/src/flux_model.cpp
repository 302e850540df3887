#include "conslaw/flux_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conslaw {

namespace {

constexpr int kSampleCount = 2049;

double sampled_reduce(const FluxModel::Fn& f, Interval u, bool want_max,
                      bool absolute) {
  double best = absolute ? std::abs(f(u.lo)) : f(u.lo);
  for (int i = 1; i < kSampleCount; ++i) {
    const double x =
        u.lo + u.width() * static_cast<double>(i) / (kSampleCount - 1);
    double y = f(x);
    if (absolute) y = std::abs(y);
    best = want_max ? std::max(best, y) : std::min(best, y);
  }
  return best;
}

}  // namespace

FluxModel::FluxModel(Fn g, Fn dg, Interval working)
    : g_(std::move(g)), dg_(std::move(dg)), working_(working) {
  if (!(working_.lo < working_.hi))
    throw std::invalid_argument("FluxModel: working interval must have lo < hi");
  extrema_.derivative_sup = [dg = dg_](Interval u) {
    return sampled_reduce(dg, u, /*want_max=*/true, /*absolute=*/true);
  };
  extrema_.min = [g = g_](Interval u) {
    return sampled_reduce(g, u, /*want_max=*/false, /*absolute=*/false);
  };
  extrema_.max = [g = g_](Interval u) {
    return sampled_reduce(g, u, /*want_max=*/true, /*absolute=*/false);
  };
}

FluxModel::FluxModel(Fn g, Fn dg, Interval working, Extrema exact)
    : g_(std::move(g)), dg_(std::move(dg)), working_(working),
      extrema_(std::move(exact)) {
  if (!(working_.lo < working_.hi))
    throw std::invalid_argument("FluxModel: working interval must have lo < hi");
  if (!extrema_.derivative_sup || !extrema_.min || !extrema_.max)
    throw std::invalid_argument("FluxModel: all extrema hooks must be set");
}

double FluxModel::derivative_consistency_error(int samples) const {
  if (samples < 3) throw std::invalid_argument("FluxModel: need >= 3 samples");
  const double w = working_.width();
  const double h = 1e-5 * w;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = working_.lo + h +
                     (w - 2.0 * h) * static_cast<double>(i) / (samples - 1);
    const double fd = (g_(x + h) - g_(x - h)) / (2.0 * h);
    const double d = dg_(x);
    worst = std::max(worst, std::abs(fd - d) / (1.0 + std::abs(d)));
  }
  return worst;
}

LWRFlux::LWRFlux(double max_density)
    : FluxModel(
          [R = max_density](double u) { return u * (1.0 - u / R); },
          [R = max_density](double u) { return 1.0 - 2.0 * u / R; },
          Interval{0.0, max_density},
          Extrema{
              // |g'| is linear, so its sup over an interval sits at an endpoint.
              [R = max_density](Interval u) {
                return std::max(std::abs(1.0 - 2.0 * u.lo / R),
                                std::abs(1.0 - 2.0 * u.hi / R));
              },
              // g is concave: interval min at an endpoint, max at the vertex R/2
              // when it lies inside.
              [R = max_density](Interval u) {
                const auto g = [R](double x) { return x * (1.0 - x / R); };
                return std::min(g(u.lo), g(u.hi));
              },
              [R = max_density](Interval u) {
                const auto g = [R](double x) { return x * (1.0 - x / R); };
                if (u.contains(R / 2.0)) return R / 4.0;
                return std::max(g(u.lo), g(u.hi));
              }}),
      max_density_(max_density) {
  if (!(max_density > 0.0) || !std::isfinite(max_density))
    throw std::invalid_argument("LWRFlux: max density must be positive");
}

double LWRFlux::subcritical_density(double inflow, double speed) const {
  if (!(speed > 0.0)) throw std::invalid_argument("LWRFlux: speed must be positive");
  if (inflow < 0.0) throw std::invalid_argument("LWRFlux: inflow must be >= 0");
  const double cap = capacity(speed);
  if (inflow > cap * (1.0 + 1e-9))
    throw std::domain_error("LWRFlux: inflow exceeds capacity at this speed");
  const double ratio = std::min(inflow / cap, 1.0);
  return 0.5 * max_density_ * (1.0 - std::sqrt(std::max(0.0, 1.0 - ratio)));
}

}  // namespace conslaw
