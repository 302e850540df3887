#pragma once

#include <vector>

#include "conslaw/solver.hpp"
#include "conslaw/step_function.hpp"

namespace conslaw {

enum class WaveKind { constant, shock, rarefaction };

/// One linear segment of a profile at a fixed time: value interpolates from
/// v_lo at x_lo to v_hi at x_hi (constant when v_lo == v_hi).
struct LinearPiece {
  double x_lo, x_hi;
  double v_lo, v_hi;
};

/// Exact entropy solution of a Riemann problem for u_t + (v g(u))_x = 0 with
/// the LWR flux g(u) = u (1 - u/R) and constant speed factor v. The jump sits
/// at x = 0. Up jumps travel as shocks with the Rankine-Hugoniot speed
/// v (1 - (u_l + u_r)/R); down jumps open into rarefaction fans whose edges
/// move at the characteristic speeds v g'(u_l) and v g'(u_r).
class RiemannSolution {
 public:
  WaveKind kind() const { return kind_; }
  double left() const { return left_; }
  double right() const { return right_; }
  double speed() const { return v_; }
  double max_density() const { return R_; }

  /// Shock speed (shock kind only).
  double shock_speed() const;
  /// Slowest and fastest signal speeds of the wave.
  double wave_speed_lo() const;
  double wave_speed_hi() const;

  /// Value at (t, x), x measured from the initial jump; right-continuous on
  /// the shock line. t must be >= 0.
  double operator()(double t, double x) const;

  /// Exact integral over [a, b] at time t.
  double integrate(double t, double a, double b) const;

  /// The profile at time t decomposed into linear pieces covering [a, b].
  std::vector<LinearPiece> pieces(double t, double a, double b) const;

 private:
  friend RiemannSolution exact_riemann_lwr(double, double, double, double);
  WaveKind kind_;
  double left_, right_, v_, R_;
  double sigma_ = 0.0;
  double fan_lo_ = 0.0, fan_hi_ = 0.0;
};

RiemannSolution exact_riemann_lwr(double u_left, double u_right, double v,
                                  double R);

/// Juxtaposition of the Riemann fans emanating from every jump of a
/// piecewise-constant datum (LWR flux, constant speed factor). Exact while the
/// waves from neighbouring jumps have not met; queries past the first
/// interaction time throw std::domain_error. The datum extends constantly
/// beyond its domain.
class GluedRiemann {
 public:
  GluedRiemann(const StepFunction& datum, double v, double R);

  double first_interaction_time() const { return t_interact_; }

  double operator()(double t, double x) const;
  double integrate(double t, double a, double b) const;

  /// Exact cell averages on a grid at time t.
  std::vector<double> cell_averages(const GridSpec& grid, double t) const;

 private:
  void check_time(double t) const;
  std::vector<LinearPiece> pieces(double t, double a, double b) const;

  StepFunction datum_;
  std::vector<double> jump_x_;
  std::vector<RiemannSolution> waves_;
  double t_interact_;
};

}  // namespace conslaw
