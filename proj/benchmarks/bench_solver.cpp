#include <benchmark/benchmark.h>

#include "conslaw/traffic.hpp"

namespace {

using namespace conslaw;

// Raw cell-update throughput of the conservative step.
void BM_ConservativeStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LWRFlux flux(0.2);
  std::vector<double> u(n), out(n);
  for (int j = 0; j < n; ++j) u[j] = 0.1 + 0.05 * ((j % 7) / 7.0);
  const double dx = 250.0 / n;
  const double dt = 0.9 * dx / (60.0 / 3.6);
  for (auto _ : state) {
    conservative_step(u, out, 60.0 / 3.6, flux, dt, dx, 0.1, 0.1);
    std::swap(u, out);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ConservativeStep)->Arg(500)->Arg(2000);

// End-to-end signalized-road run.
void BM_TrafficScenario(benchmark::State& state) {
  TrafficScenario sc;
  sc.horizon = 300.0;
  for (auto _ : state) {
    TrafficRun run = run_scenario(sc, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(run.field.profiles.back().data());
  }
}
BENCHMARK(BM_TrafficScenario)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
