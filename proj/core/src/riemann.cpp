#include "conslaw/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conslaw {

namespace {

double integrate_pieces(const std::vector<LinearPiece>& ps) {
  double s = 0.0;
  for (const auto& p : ps) s += 0.5 * (p.v_lo + p.v_hi) * (p.x_hi - p.x_lo);
  return s;
}

}  // namespace

RiemannSolution exact_riemann_lwr(double u_left, double u_right, double v,
                                  double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw std::invalid_argument("exact_riemann_lwr: R must be positive");
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("exact_riemann_lwr: v must be positive");
  if (u_left < 0.0 || u_left > R || u_right < 0.0 || u_right > R)
    throw std::domain_error("exact_riemann_lwr: states must lie in [0, R]");

  RiemannSolution r;
  r.left_ = u_left;
  r.right_ = u_right;
  r.v_ = v;
  r.R_ = R;
  const auto dg = [R](double u) { return 1.0 - 2.0 * u / R; };
  if (u_left == u_right) {
    r.kind_ = WaveKind::constant;
    r.sigma_ = r.fan_lo_ = r.fan_hi_ = v * dg(u_left);
  } else if (u_left < u_right) {
    // concave flux: up jumps are compressive
    r.kind_ = WaveKind::shock;
    r.sigma_ = v * (1.0 - (u_left + u_right) / R);
    r.fan_lo_ = r.fan_hi_ = r.sigma_;
  } else {
    r.kind_ = WaveKind::rarefaction;
    r.fan_lo_ = v * dg(u_left);
    r.fan_hi_ = v * dg(u_right);
    r.sigma_ = 0.0;
  }
  return r;
}

double RiemannSolution::shock_speed() const {
  if (kind_ != WaveKind::shock)
    throw std::logic_error("RiemannSolution: not a shock");
  return sigma_;
}

double RiemannSolution::wave_speed_lo() const { return fan_lo_; }
double RiemannSolution::wave_speed_hi() const { return fan_hi_; }

double RiemannSolution::operator()(double t, double x) const {
  if (t < 0.0) throw std::domain_error("RiemannSolution: t must be >= 0");
  if (t == 0.0) return x < 0.0 ? left_ : right_;
  const double xi = x / t;
  switch (kind_) {
    case WaveKind::constant:
      return left_;
    case WaveKind::shock:
      return xi < sigma_ ? left_ : right_;
    case WaveKind::rarefaction:
      if (xi <= fan_lo_) return left_;
      if (xi >= fan_hi_) return right_;
      return 0.5 * R_ * (1.0 - xi / v_);
  }
  return right_;  // unreachable
}

std::vector<LinearPiece> RiemannSolution::pieces(double t, double a,
                                                 double b) const {
  if (t < 0.0) throw std::domain_error("RiemannSolution: t must be >= 0");
  if (a > b) std::swap(a, b);
  std::vector<LinearPiece> out;
  const double lo = fan_lo_ * t;
  const double hi = fan_hi_ * t;
  auto add_const = [&out](double x0, double x1, double value) {
    if (x1 > x0) out.push_back({x0, x1, value, value});
  };
  if (kind_ == WaveKind::rarefaction && t > 0.0 && hi > lo) {
    const double fa = std::clamp(a, lo, hi);
    const double fb = std::clamp(b, lo, hi);
    add_const(a, std::min(b, lo), left_);
    if (fb > fa) {
      const auto value = [this, t](double x) {
        return 0.5 * R_ * (1.0 - x / (v_ * t));
      };
      out.push_back({fa, fb, value(fa), value(fb)});
    }
    add_const(std::max(a, hi), b, right_);
  } else {
    // constant, shock, or t == 0: a single jump at sigma * t (or at 0)
    const double cut = kind_ == WaveKind::shock ? sigma_ * t : 0.0;
    if (kind_ == WaveKind::constant) {
      add_const(a, b, left_);
    } else {
      add_const(a, std::min(b, std::max(a, cut)), left_);
      add_const(std::max(a, std::min(b, cut)), b, right_);
    }
  }
  return out;
}

double RiemannSolution::integrate(double t, double a, double b) const {
  return integrate_pieces(pieces(t, a, b));
}

GluedRiemann::GluedRiemann(const StepFunction& datum, double v, double R)
    : datum_(datum), t_interact_(std::numeric_limits<double>::infinity()) {
  const auto edges = datum.edges();
  const auto values = datum.values();
  for (std::size_t i = 1; i < values.size(); ++i) {
    jump_x_.push_back(edges[i]);
    waves_.push_back(exact_riemann_lwr(values[i - 1], values[i], v, R));
  }
  for (std::size_t i = 0; i + 1 < waves_.size(); ++i) {
    const double gap = jump_x_[i + 1] - jump_x_[i];
    const double closing = waves_[i].wave_speed_hi() - waves_[i + 1].wave_speed_lo();
    if (closing > 0.0) t_interact_ = std::min(t_interact_, gap / closing);
  }
}

void GluedRiemann::check_time(double t) const {
  if (t < 0.0) throw std::domain_error("GluedRiemann: t must be >= 0");
  if (t >= t_interact_)
    throw std::domain_error(
        "GluedRiemann: time reaches the first wave interaction; the glued "
        "profile is no longer exact");
}

double GluedRiemann::operator()(double t, double x) const {
  check_time(t);
  if (waves_.empty()) return datum_.first_value();
  // waves occupy disjoint ordered cones [x_k + s_lo t, x_k + s_hi t]
  for (std::size_t k = 0; k < waves_.size(); ++k) {
    if (x < jump_x_[k] + waves_[k].wave_speed_lo() * t)
      return waves_[k].left();
    if (x <= jump_x_[k] + waves_[k].wave_speed_hi() * t)
      return waves_[k](std::max(t, 0.0), x - jump_x_[k]);
  }
  return waves_.back().right();
}

std::vector<LinearPiece> GluedRiemann::pieces(double t, double a, double b) const {
  check_time(t);
  if (a > b) std::swap(a, b);
  std::vector<LinearPiece> out;
  if (waves_.empty()) {
    out.push_back({a, b, datum_.first_value(), datum_.first_value()});
    return out;
  }
  double cursor = a;
  for (std::size_t k = 0; k < waves_.size() && cursor < b; ++k) {
    const double w_lo = jump_x_[k] + waves_[k].wave_speed_lo() * t;
    const double w_hi = jump_x_[k] + waves_[k].wave_speed_hi() * t;
    if (w_lo > cursor) {
      const double stop = std::min(w_lo, b);
      out.push_back({cursor, stop, waves_[k].left(), waves_[k].left()});
      cursor = stop;
    }
    if (cursor >= b) break;
    if (w_hi > cursor) {
      const double stop = std::min(w_hi, b);
      for (auto p : waves_[k].pieces(t, cursor - jump_x_[k], stop - jump_x_[k])) {
        p.x_lo += jump_x_[k];
        p.x_hi += jump_x_[k];
        out.push_back(p);
      }
      cursor = stop;
    }
  }
  if (cursor < b)
    out.push_back({cursor, b, waves_.back().right(), waves_.back().right()});
  return out;
}

double GluedRiemann::integrate(double t, double a, double b) const {
  return integrate_pieces(pieces(t, a, b));
}

std::vector<double> GluedRiemann::cell_averages(const GridSpec& grid,
                                                double t) const {
  std::vector<double> out(static_cast<std::size_t>(grid.n_cells));
  const double dx = grid.dx();
  for (int j = 0; j < grid.n_cells; ++j) {
    const double a = grid.x_lo + j * dx;
    const double b = (j + 1 == grid.n_cells) ? grid.x_hi : grid.x_lo + (j + 1) * dx;
    out[static_cast<std::size_t>(j)] = integrate(t, a, b) / (b - a);
  }
  return out;
}

}  // namespace conslaw
