#include "conslaw/speed_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conslaw {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

SpeedProfile::SpeedProfile(StepFunction steps, double floor)
    : steps_(std::move(steps)), floor_(floor) {
  require(std::isfinite(floor_) && floor_ > 0.0,
          "SpeedProfile: floor must be strictly positive");
  require(steps_.domain_lo() == 0.0, "SpeedProfile: domain must start at 0");
  for (double v : steps_.values())
    require(v >= floor_, "SpeedProfile: values must not drop below the floor");

  cumulative_.resize(steps_.piece_count() + 1);
  cumulative_[0] = 0.0;
  const auto edges = steps_.edges();
  const auto values = steps_.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + values[i] * (edges[i + 1] - edges[i]);
}

SpeedProfile SpeedProfile::constant(double value, double horizon) {
  return SpeedProfile(StepFunction(0.0, horizon, value), value);
}

double SpeedProfile::sup() const { return steps_.value_range().hi; }

double SpeedProfile::sup_on(double t) const {
  const double slack = 1e-12 * (1.0 + horizon());
  if (t < -slack || t > horizon() + slack)
    throw std::domain_error("SpeedProfile: time outside [0, T]");
  if (t <= 0.0) return steps_.first_value();
  const auto edges = steps_.edges();
  const auto values = steps_.values();
  double m = values[0];
  for (std::size_t i = 1; i < values.size() && edges[i] < t; ++i)
    m = std::max(m, values[i]);
  return m;
}

double SpeedProfile::to_rescaled_time(double t) const {
  const double slack = 1e-12 * (1.0 + horizon());
  if (t < -slack || t > horizon() + slack)
    throw std::domain_error("SpeedProfile: time outside [0, T]");
  t = std::clamp(t, 0.0, horizon());
  const std::size_t i = steps_.piece_index(t);
  return cumulative_[i] + steps_.values()[i] * (t - steps_.edges()[i]);
}

double SpeedProfile::from_rescaled_time(double tau) const {
  const double hat = rescaled_horizon();
  const double slack = 1e-12 * (1.0 + hat);
  if (tau < -slack || tau > hat + slack)
    throw std::domain_error("SpeedProfile: rescaled time outside [0, tau(T)]");
  tau = std::clamp(tau, 0.0, hat);
  auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end() - 1, tau);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return steps_.edges()[i] + (tau - cumulative_[i]) / steps_.values()[i];
}

double SpeedProfile::l1_distance(const SpeedProfile& other, double t) const {
  const double slack = 1e-12 * (1.0 + std::min(horizon(), other.horizon()));
  if (t < -slack || t > std::min(horizon(), other.horizon()) + slack)
    throw std::domain_error("SpeedProfile: window exceeds a profile horizon");
  if (t <= 0.0) return 0.0;
  t = std::min({t, horizon(), other.horizon()});
  return steps_.restricted(0.0, t).l1_distance(other.steps_.restricted(0.0, t));
}

MollifiedSpeed SpeedProfile::mollified(int n) const { return MollifiedSpeed(*this, n); }

namespace {

// CDF of the kernel 140 (z(1-z))^3 on [0, 1]; H(0) = 0, H(1) = 1.
double kernel_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  const double z4 = z * z * z * z;
  return z4 * (35.0 + z * (-84.0 + z * (70.0 - 20.0 * z)));
}

}  // namespace

MollifiedSpeed::MollifiedSpeed(const SpeedProfile& base, int order)
    : base_steps_(base.steps()), floor_(base.floor()), sup_(base.sup()), order_(order) {
  if (order < 1) throw std::invalid_argument("MollifiedSpeed: order must be >= 1");
}

double MollifiedSpeed::operator()(double t) const {
  // v_n(t) = integral over z in [0,1] of vbar(t - z/n) * kernel(z), where vbar
  // extends the profile by its floor outside [0, T]. vbar(t - z/n) is a step
  // function of z; cut [0,1] at the preimages of all edges of vbar.
  const double n = static_cast<double>(order_);
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double e : base_steps_.edges()) {
    const double z = n * (t - e);
    if (z > 0.0 && z < 1.0) cuts.push_back(z);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());

  const double T = base_steps_.domain_hi();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double zm = 0.5 * (cuts[i] + cuts[i + 1]);
    const double s = t - zm / n;
    const double value = (s < 0.0 || s > T) ? floor_ : base_steps_(s);
    acc += value * (kernel_cdf(cuts[i + 1]) - kernel_cdf(cuts[i]));
  }
  return acc;
}

SpeedProfile MollifiedSpeed::sampled(double resolution) const {
  if (!(resolution > 0.0))
    throw std::invalid_argument("MollifiedSpeed: resolution must be positive");
  const double T = horizon();
  const std::size_t pieces =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T / resolution)));
  std::vector<double> bps, vals;
  bps.reserve(pieces - 1);
  vals.reserve(pieces);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = T * static_cast<double>(i) / static_cast<double>(pieces);
    const double b = T * static_cast<double>(i + 1) / static_cast<double>(pieces);
    if (i > 0) bps.push_back(a);
    // exact values lie in [floor, sup]; clamp away summation rounding
    vals.push_back(std::clamp((*this)(0.5 * (a + b)), floor_, sup_));
  }
  return SpeedProfile(StepFunction(0.0, T, std::move(bps), std::move(vals)), floor_);
}

}  // namespace conslaw
