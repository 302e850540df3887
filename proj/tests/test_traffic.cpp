// Tests for the signalized-road scenario: light schedules, problem assembly,
// the congestion functional, and the speed-limit sweep.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conslaw/traffic.hpp"

using namespace conslaw;

TEST_CASE("queue weight ramps from 0 to 1 across the congestion band") {
  CHECK(queue_weight(0.0, 1.0) == 0.0);
  CHECK(queue_weight(0.75, 1.0) == 0.0);   // band opens strictly above 0.75 R
  CHECK(queue_weight(0.8, 1.0) == 0.5);    // 10 * 0.8 - 7.5, exact in doubles
  CHECK(queue_weight(0.85, 1.0) == 1.0);
  CHECK(queue_weight(1.0, 1.0) == 1.0);
  CHECK(queue_weight(0.78, 1.0) == doctest::Approx(0.3).epsilon(1e-12));

  SUBCASE("only the ratio to the jam density matters") {
    CHECK(queue_weight(0.1, 0.2) == 0.0);
    CHECK(queue_weight(0.2, 0.2) == 1.0);
    CHECK(queue_weight(0.16, 0.2) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("nondecreasing in the density") {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      double w = queue_weight(i / 100.0, 1.0);
      CHECK(w >= prev);
      prev = w;
    }
    CHECK(prev == 1.0);
  }
}

TEST_CASE("light schedule: right-continuous phases and switch instants") {
  // The scenario's exit light: green until 12 s, then 45 s red / 30 s green.
  LightSchedule exit(LightColor::green, 12.0, 30.0, 45.0);
  CHECK(exit.cycle() == 75.0);
  CHECK(exit.color(0.0) == LightColor::green);
  CHECK(exit.color(11.999) == LightColor::green);
  CHECK(exit.color(12.0) == LightColor::red);  // the new phase owns its start
  CHECK(exit.color(56.999) == LightColor::red);
  CHECK(exit.color(57.0) == LightColor::green);
  CHECK(exit.switch_times(100.0) == std::vector<double>{12.0, 57.0, 87.0});
  CHECK(exit.switch_times(12.0).empty());  // horizon is exclusive

  // The entry light: green until 39 s, then 27 s red / 39 s green.
  LightSchedule entry(LightColor::green, 39.0, 39.0, 27.0);
  CHECK(entry.cycle() == 66.0);
  CHECK(entry.switch_times(100.0) == std::vector<double>{39.0, 66.0});
  CHECK(entry.color(38.999) == LightColor::green);
  CHECK(entry.color(39.0) == LightColor::red);
  CHECK(entry.color(65.999) == LightColor::red);
  CHECK(entry.color(66.0) == LightColor::green);

  SUBCASE("periodic after the first switch") {
    for (int i = 0; i < 20; ++i) {
      double t = 39.0 + 66.0 * i / 20.0;
      CHECK(entry.color(t) == entry.color(t + entry.cycle()));
    }
  }
  SUBCASE("durations must be positive") {
    CHECK_THROWS_AS(LightSchedule(LightColor::red, 0.0, 30.0, 45.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(LightSchedule(LightColor::red, 12.0, 0.0, 45.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(LightSchedule(LightColor::red, 12.0, 30.0, -1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("inflow boundary density inverts the flux at the given speed") {
  LWRFlux flux(0.2);
  TrafficScenario sc;
  // At the 40 km/h red-phase limit the demand equals the capacity exactly
  // (2000/3600 = (40/3.6) * 0.2/4), so the boundary density is the critical
  // half of the jam density.
  CHECK(inflow_boundary_density(sc.inflow_rate, sc.red_speed, flux) == 0.1);

  double d = inflow_boundary_density(sc.inflow_rate, sc.green_speed, flux);
  CHECK(d == doctest::Approx(0.1 * (1.0 - std::sqrt(1.0 / 3.0))).epsilon(1e-12));
  CHECK(sc.green_speed * flux(d) == doctest::Approx(sc.inflow_rate).epsilon(1e-12));
  CHECK(d < 0.1);  // subcritical branch
}

TEST_CASE("scenario assembly: boundary data and speed follow the lights") {
  TrafficScenario sc;
  IBVPProblem p = build_problem(sc);

  CHECK(p.horizon() == 1200.0);
  CHECK(p.space_domain().lo == 0.0);
  CHECK(p.space_domain().hi == 250.0);
  CHECK(p.initial()(100.0) == 0.0);  // the road starts empty
  CHECK(sc.inflow_end() == 198.0);

  const StepFunction& left = p.left_data();
  const StepFunction& right = p.right_data();

  // Exit light green on [0,12): full speed, open right end, subcritical
  // inflow density at the green speed.
  CHECK(p.speed()(0.0) == sc.green_speed);
  CHECK(right(0.0) == 0.0);
  CHECK(left(0.0) ==
        doctest::Approx(0.1 * (1.0 - std::sqrt(1.0 / 3.0))).epsilon(1e-12));

  // Exit red on [12,57): reduced speed, jam-density wall on the right, and
  // at the 40 km/h limit the inflow density sits exactly at capacity.
  CHECK(p.speed()(12.0) == sc.red_speed);
  CHECK(p.speed()(56.9) == sc.red_speed);
  CHECK(right(12.0) == 0.2);
  CHECK(left(12.0) == 0.1);

  // Entry red on [39,66): no demand regardless of the exit phase.
  CHECK(left(39.0) == 0.0);
  CHECK(left(66.0) == left(0.0));  // both entry and exit green again

  // Back to green at 57, next wall on [87,132).
  CHECK(p.speed()(57.0) == sc.green_speed);
  CHECK(right(57.0) == 0.0);
  CHECK(right(87.0) == 0.2);
  CHECK(right(132.0) == 0.0);

  // Demand stops for good at three entry cycles.
  CHECK(left(198.0) == 0.0);
  CHECK(left(500.0) == 0.0);

  SUBCASE("a red-phase limit below the demand is rejected") {
    TrafficScenario starved = sc;
    starved.red_speed = 39.0 / 3.6;  // capacity 0.542 < demand 0.556 cars/s
    CHECK_THROWS_AS((void)build_problem(starved), std::domain_error);
  }
  SUBCASE("geometry and speeds are validated") {
    TrafficScenario bad = sc;
    bad.horizon = 0.0;
    CHECK_THROWS_AS((void)build_problem(bad), std::invalid_argument);
    bad = sc;
    bad.red_speed = 0.0;
    CHECK_THROWS_AS((void)build_problem(bad), std::invalid_argument);
  }
}

TEST_CASE("queue functional: exact value on a handmade field") {
  // Grid [0,250] with 25 cells of width 10; measurement window [155, 250]
  // cuts the cell [150,160) in half-and-then-some, so the partial-overlap
  // branch is exercised. Jammed cells weigh 1, light cells weigh 0.
  TrafficScenario sc;
  sc.queue_window = 95.0;  // window low edge 155 falls inside a cell
  GridSpec grid = GridSpec::covering({0.0, 250.0}, 25);

  std::vector<double> jam_tail(25, 0.05);
  for (int j = 15; j < 25; ++j) jam_tail[static_cast<std::size_t>(j)] = 0.2;
  std::vector<double> light(25, 0.05);

  SolutionField f;
  f.grid = grid;
  f.times = {0.25, 0.75, 1.25};
  f.profiles = {jam_tail, jam_tail, light};

  // Two records contribute (5 m partial + 9 * 10 m full) * 0.5 s each.
  CHECK(queue_functional(f, sc) == 95.0);

  SUBCASE("the functional is 10/R-Lipschitz in the density") {
    std::vector<double> nudged = jam_tail;
    nudged[20] = 0.164;  // 0.82 R, inside the linear band
    std::vector<double> base = jam_tail;
    base[20] = 0.16;  // 0.80 R
    SolutionField fa = f, fb = f;
    fa.profiles = {base};
    fb.profiles = {nudged};
    double dJ = queue_functional(fb, sc) - queue_functional(fa, sc);
    // (10 / R) * (0.164 - 0.16) * dx * record_dt = 0.2 * 10 * 0.5 = 1
    CHECK(dJ == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("scenario run: every admitted car eventually leaves") {
  TrafficScenario sc;
  TrafficRun run = run_scenario(sc, 200);

  // Demand is 2000/3600 cars/s over three 39 s green windows = 65 cars, and
  // the run shows the queue never chokes the entrance at the 40 km/h limit.
  CHECK(run.field.influx_total() == doctest::Approx(65.0).epsilon(1e-9));
  CHECK(run.field.outflux_total() == doctest::Approx(65.0).epsilon(1e-9));

  // Records sit at the midpoints used by the time quadrature.
  REQUIRE(run.field.times.size() == 2400);
  CHECK(run.field.times.front() == 0.25);
  CHECK(run.field.times.back() == 1199.75);
  CHECK(run.field.profiles.front().size() == 200);

  double J = queue_functional(run.field, sc);
  CHECK(J > 6500.0);  // measured 7480 at this resolution
  CHECK(J < 8500.0);

  SUBCASE("reruns are bit-identical") {
    TrafficRun again = run_scenario(sc, 200);
    CHECK(again.field.profiles.back() == run.field.profiles.back());
    CHECK(again.field.outflux_total() == run.field.outflux_total());
  }
}

TEST_CASE("speed-limit sweep: lower red-phase limit means less congestion") {
  TrafficScenario sc;
  std::vector<SweepRow> rows = sweep_speed_limits(sc, {40.0, 70.0}, 150);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].red_speed_kmh == 40.0);
  CHECK(rows[1].red_speed_kmh == 70.0);

  // Both limits discharge the same 65 cars; the 40 km/h cap spreads the
  // platoon and cuts the time spent near jam density by about a quarter.
  CHECK(rows[0].total_discharge == doctest::Approx(65.0).epsilon(1e-9));
  CHECK(rows[1].total_discharge == doctest::Approx(65.0).epsilon(1e-9));
  CHECK(rows[0].congestion < rows[1].congestion);
  CHECK(rows[0].congestion < 0.8 * rows[1].congestion);  // measured 7393 vs 9895

  for (const SweepRow& r : rows) {
    CHECK(r.emptying_time > sc.inflow_end());
    CHECK(r.emptying_time < 300.0);  // measured 227.7 s for both limits
  }
}

TEST_CASE("emptying time falls back to the horizon under sustained demand") {
  TrafficScenario sc;
  sc.inflow_cycles = 20.0;  // demand outlives the simulation
  std::vector<SweepRow> rows = sweep_speed_limits(sc, {40.0}, 100);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].emptying_time == sc.horizon);
}
