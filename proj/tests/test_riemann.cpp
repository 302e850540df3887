#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "conslaw/riemann.hpp"

using conslaw::exact_riemann_lwr;
using conslaw::GluedRiemann;
using conslaw::GridSpec;
using conslaw::IBVPProblem;
using conslaw::LinearPiece;
using conslaw::LWRFlux;
using conslaw::RiemannSolution;
using conslaw::SolutionField;
using conslaw::SolverConfig;
using conslaw::solve;
using conslaw::SpeedProfile;
using conslaw::StepFunction;
using conslaw::WaveKind;

namespace {

void check_tiling(const std::vector<LinearPiece>& ps, double a, double b) {
  REQUIRE(!ps.empty());
  CHECK(ps.front().x_lo == doctest::Approx(a).epsilon(1e-14));
  CHECK(ps.back().x_hi == doctest::Approx(b).epsilon(1e-14));
  for (std::size_t i = 0; i + 1 < ps.size(); ++i)
    CHECK(ps[i].x_hi == doctest::Approx(ps[i + 1].x_lo).epsilon(1e-14));
  for (const auto& p : ps) CHECK(p.x_hi >= p.x_lo);
}

}  // namespace

TEST_CASE("up jumps travel as shocks at the Rankine-Hugoniot speed") {
  RiemannSolution r = exact_riemann_lwr(0.2, 0.8, 1.0, 1.0);
  CHECK(r.kind() == WaveKind::shock);
  CHECK(r.shock_speed() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.wave_speed_lo() == r.shock_speed());
  CHECK(r.wave_speed_hi() == r.shock_speed());

  RiemannSolution s = exact_riemann_lwr(0.1, 0.3, 2.0, 1.0);
  CHECK(s.shock_speed() == doctest::Approx(1.2).epsilon(1e-14));
  // Right-continuous on the shock line.
  CHECK(s(1.0, 1.19) == 0.1);
  CHECK(s(1.0, 1.2) == 0.3);
  CHECK(s(1.0, 1.21) == 0.3);
  CHECK(s(0.0, -0.001) == 0.1);
  CHECK(s(0.0, 0.0) == 0.3);
}

TEST_CASE("equal states stay constant") {
  RiemannSolution r = exact_riemann_lwr(0.4, 0.4, 1.5, 1.0);
  CHECK(r.kind() == WaveKind::constant);
  CHECK(r(2.0, -3.0) == 0.4);
  CHECK(r(2.0, 5.0) == 0.4);
  CHECK(r.integrate(2.0, -1.0, 1.0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("down jumps open into centred rarefaction fans") {
  const double v = 2.0;
  const double R = 1.0;
  RiemannSolution r = exact_riemann_lwr(R, 0.0, v, R);
  CHECK(r.kind() == WaveKind::rarefaction);
  CHECK(r.wave_speed_lo() == doctest::Approx(-v).epsilon(1e-15));
  CHECK(r.wave_speed_hi() == doctest::Approx(v).epsilon(1e-15));
  CHECK_THROWS_AS(r.shock_speed(), std::logic_error);

  const double t = 0.7;
  CHECK(r(t, -v * t) == R);             // fan edges belong to the states
  CHECK(r(t, -v * t - 0.01) == R);
  CHECK(r(t, v * t) == 0.0);
  CHECK(r(t, 0.0) == doctest::Approx(0.5 * R).epsilon(1e-15));
  // Self-similar interior value u = R/2 (1 - x/(v t)).
  CHECK(r(t, 0.3 * v * t) == doctest::Approx(0.5 * R * 0.7).epsilon(1e-13));

  // The integral over the full fan is R v t (the odd part cancels).
  CHECK(r.integrate(t, -v * t, v * t) == doctest::Approx(R * v * t).epsilon(1e-13));
  // Adding plateaus on both sides adds R on the left and 0 on the right.
  CHECK(r.integrate(t, -v * t - 1.0, v * t + 1.0) ==
        doctest::Approx(R * v * t + R).epsilon(1e-13));

  check_tiling(r.pieces(t, -2.0, 2.0), -2.0, 2.0);
  check_tiling(r.pieces(0.0, -1.0, 1.0), -1.0, 1.0);
}

TEST_CASE("riemann construction rejects bad arguments") {
  CHECK_THROWS_AS(exact_riemann_lwr(0.2, 0.4, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_riemann_lwr(0.2, 0.4, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_riemann_lwr(-0.1, 0.4, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(exact_riemann_lwr(0.2, 1.4, 1.0, 1.0), std::domain_error);
  RiemannSolution r = exact_riemann_lwr(0.2, 0.8, 1.0, 1.0);
  CHECK_THROWS_AS(r(-0.5, 0.0), std::domain_error);
}

TEST_CASE("glued fans reproduce a single translated wave") {
  StepFunction datum(0.0, 10.0, {5.0}, {0.8, 0.2});
  GluedRiemann glued(datum, 1.0, 1.0);
  RiemannSolution wave = exact_riemann_lwr(0.8, 0.2, 1.0, 1.0);
  CHECK(glued.first_interaction_time() == std::numeric_limits<double>::infinity());

  for (double t : {0.0, 0.5, 2.0}) {
    for (double x : {0.1, 3.0, 4.4, 5.0, 5.7, 9.9}) {
      CHECK(glued(t, x) == doctest::Approx(wave(t, x - 5.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("glued fans refuse queries past the first wave interaction") {
  StepFunction datum(0.0, 10.0, {4.0, 6.0}, {0.2, 0.8, 0.3});
  GluedRiemann glued(datum, 1.0, 1.0);
  // Wave 1 is a stationary shock; wave 2 is a fan whose left edge moves at
  // -0.6, so they meet after (6 - 4) / 0.6 = 10/3 time units.
  CHECK(glued.first_interaction_time() == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
  CHECK_NOTHROW(glued(3.0, 5.0));
  CHECK_THROWS_AS(glued(3.4, 5.0), std::domain_error);
  CHECK_THROWS_AS(glued.integrate(3.5, 0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(glued(-0.1, 5.0), std::domain_error);
}

TEST_CASE("glued profiles conserve mass up to the far-field flux difference") {
  StepFunction datum(0.0, 10.0, {4.0, 6.0}, {0.2, 0.8, 0.3});
  GluedRiemann glued(datum, 1.0, 1.0);
  const double m0 = glued.integrate(0.0, 0.0, 10.0);
  CHECK(m0 == doctest::Approx(3.6).epsilon(1e-14));
  // d/dt of the mass is g(far left) - g(far right) = 0.16 - 0.21 while all
  // waves stay inside the window.
  const double t = 3.0;
  CHECK(glued.integrate(t, 0.0, 10.0) ==
        doctest::Approx(m0 + t * (0.16 - 0.21)).epsilon(1e-12));
}

TEST_CASE("cell averages integrate the profile exactly") {
  StepFunction datum(0.0, 10.0, {4.0, 6.0}, {0.2, 0.8, 0.3});
  GluedRiemann glued(datum, 1.0, 1.0);
  GridSpec grid = GridSpec::covering({0.0, 10.0}, 80);
  const double t = 2.0;
  std::vector<double> avg = glued.cell_averages(grid, t);
  REQUIRE(avg.size() == 80);
  double total = 0.0;
  for (double a : avg) total += a * grid.dx();
  CHECK(total == doctest::Approx(glued.integrate(t, 0.0, 10.0)).epsilon(1e-12));
  // Spot check one cell directly.
  const double a = grid.x_lo + 37 * grid.dx();
  const double b = a + grid.dx();
  CHECK(avg[37] == doctest::Approx(glued.integrate(t, a, b) / grid.dx()).epsilon(1e-12));
}

TEST_CASE("the marching scheme converges to the glued exact solution") {
  // Two separated waves, compatible constant boundary data; measured on a
  // 400-cell grid the scheme's L1 error must stay under a frozen ceiling that
  // a non-convergent scheme would break.
  StepFunction initial(0.0, 10.0, {4.0, 6.0}, {0.2, 0.8, 0.3});
  StepFunction left(0.0, 3.0, 0.2);
  StepFunction right(0.0, 3.0, 0.3);
  LWRFlux flux(1.0);
  IBVPProblem p = IBVPProblem::segment(initial, left, right,
                                       SpeedProfile::constant(1.0, 3.0), flux);
  GluedRiemann glued(initial, 1.0, 1.0);

  SolverConfig cfg;
  cfg.record_times = {3.0};
  GridSpec grid = GridSpec::covering({0.0, 10.0}, 400);
  SolutionField f = solve(p, grid, cfg);

  std::vector<double> exact = glued.cell_averages(grid, 3.0);
  double err = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j)
    err += std::abs(f.profiles.back()[j] - exact[j]) * grid.dx();

  CHECK(err < 0.06);   // measured 0.0413 at n=400 (0.072 at 200, 0.029 at 800)
  CHECK(err > 0.0);    // and it is a genuine discretization, not a copy
}
