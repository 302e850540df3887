#include "conslaw/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace conslaw {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Range of a step function restricted to [0, t] (ess inf / ess sup). Pieces
// with positive overlap count; at t == 0 only the right trace does.
Interval range_on(const StepFunction& f, double t) {
  if (t <= 0.0) {
    const double v = f.first_value();
    return {v, v};
  }
  const auto edges = f.edges();
  const auto values = f.values();
  Interval r{values[0], values[0]};
  for (std::size_t i = 1; i < values.size() && edges[i] < t; ++i) {
    r.lo = std::min(r.lo, values[i]);
    r.hi = std::max(r.hi, values[i]);
  }
  return r;
}

}  // namespace

Interval data_hull(const StepFunction& initial,
                   std::span<const StepFunction* const> time_data, double t) {
  Interval h = initial.value_range();
  for (const StepFunction* f : time_data) h = Interval::join(h, range_on(*f, t));
  return h;
}

IBVPProblem::IBVPProblem(DomainKind kind, StepFunction initial, StepFunction left,
                         std::optional<StepFunction> right, SpeedProfile speed,
                         FluxModel flux)
    : kind_(kind),
      initial_(std::move(initial)),
      left_(std::move(left)),
      right_(std::move(right)),
      speed_(std::move(speed)),
      flux_(std::move(flux)) {
  require(initial_.domain_lo() == 0.0, "IBVPProblem: space domain must start at 0");
  require(left_.domain_lo() == 0.0 && left_.domain_hi() == horizon(),
          "IBVPProblem: left data must live on [0, T]");
  if (right_)
    require(right_->domain_lo() == 0.0 && right_->domain_hi() == horizon(),
            "IBVPProblem: right data must live on [0, T]");

  const Interval work =
      flux_.working_interval().inflated(1e-12 * flux_.working_interval().width());
  const Interval h = hull(horizon());
  require(work.contains(h), "IBVPProblem: data leave the flux working interval");
}

IBVPProblem IBVPProblem::segment(StepFunction initial, StepFunction left_data,
                                 StepFunction right_data, SpeedProfile speed,
                                 FluxModel flux) {
  return IBVPProblem(DomainKind::segment, std::move(initial), std::move(left_data),
                     std::move(right_data), std::move(speed), std::move(flux));
}

IBVPProblem IBVPProblem::half_line(StepFunction initial, StepFunction left_data,
                                   SpeedProfile speed, FluxModel flux,
                                   double x_max) {
  require(x_max >= initial.domain_hi(),
          "IBVPProblem: x_max must cover the initial datum");
  StepFunction extended = x_max > initial.domain_hi()
                              ? initial.extended(x_max, 0.0)
                              : std::move(initial);
  IBVPProblem p(DomainKind::half_line, std::move(extended), std::move(left_data),
                std::nullopt, std::move(speed), std::move(flux));
  // Causality margin: waves start inside the support or at the left boundary
  // and travel at most sup(v) * ||g'|| * T, so the truncation edge stays inert.
  const double radius = p.max_wave_speed() * p.horizon();
  require(p.initial_.support_hi() + radius <= x_max,
          "IBVPProblem: x_max too small, waves could reach the truncation edge");
  return p;
}

const StepFunction& IBVPProblem::right_data() const {
  if (!right_)
    throw std::logic_error("IBVPProblem: half-line problem has no right data");
  return *right_;
}

Interval IBVPProblem::hull(double t) const {
  if (right_) {
    const std::array<const StepFunction*, 2> td{&left_, &*right_};
    return data_hull(initial_, td, t);
  }
  const std::array<const StepFunction*, 1> td{&left_};
  return data_hull(initial_, td, t);
}

double IBVPProblem::tv_functional(double t) const {
  const double slack = 1e-12 * (1.0 + horizon());
  if (t < -slack || t > horizon() + slack)
    throw std::domain_error("IBVPProblem: time outside [0, T]");
  t = std::clamp(t, 0.0, horizon());
  double tv = initial_.total_variation() +
              std::abs(left_.first_value() - initial_.first_value());
  if (t > 0.0) tv += left_.restricted(0.0, t).total_variation();
  if (right_) {
    tv += std::abs(right_->first_value() - initial_.last_value());
    if (t > 0.0) tv += right_->restricted(0.0, t).total_variation();
  }
  return tv;
}

double IBVPProblem::max_wave_speed() const {
  return speed_.sup() * flux_.derivative_sup(hull(horizon()));
}

TranslationBound bv_translation_bound(const StepFunction& u,
                                      const StepFunction& phi, double y) {
  if (!(y > 0.0) || y > phi.domain_hi() + 1e-12 * (1.0 + phi.domain_hi()))
    throw std::invalid_argument("bv_translation_bound: need 0 < y within phi's domain");
  for (double p : phi.values())
    if (p < 0.0)
      throw std::invalid_argument("bv_translation_bound: phi must be nonnegative");

  const auto eval_clamped = [&u](double x) {
    return u(std::clamp(x, u.domain_lo(), u.domain_hi()));
  };

  // Exact integral: on each piece of phi the shift is constant, and
  // x -> |u(x + h) - u(x)| is a step function whose breakpoints are the edges
  // of u and the edges of u shifted left by h.
  double lhs = 0.0;
  const auto pedges = phi.edges();
  const auto pvalues = phi.values();
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    const double a = pedges[i];
    const double b = std::min(pedges[i + 1], y);
    if (b <= a) break;
    const double h = pvalues[i];
    std::vector<double> cuts{a, b};
    for (double e : u.edges()) {
      if (e > a && e < b) cuts.push_back(e);
      const double shifted = e - h;
      if (shifted > a && shifted < b) cuts.push_back(shifted);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
      lhs += std::abs(eval_clamped(mid + h) - eval_clamped(mid)) *
             (cuts[j + 1] - cuts[j]);
    }
  }

  const double sup_phi = range_on(phi, y).hi;
  const double rhs =
      sup_phi * u.restricted(u.domain_lo(), std::min(y, u.domain_hi()))
                    .total_variation();
  const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
  return {lhs, rhs, lhs <= rhs + 1e-12 * scale};
}

}  // namespace conslaw
