#include <benchmark/benchmark.h>

#include "ptorsion/geometry.hpp"
#include "ptorsion/inequalities.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

using namespace ptorsion;

namespace {

// Args: inverse spacing, p scaled by 10.
void BM_TorsionDisk(benchmark::State& state) {
  const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / static_cast<double>(state.range(0)));
  const double p = static_cast<double>(state.range(1)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_torsion(g, p).integral);
  state.counters["nodes"] = static_cast<double>(g->interior_count());
}
BENCHMARK(BM_TorsionDisk)
    ->ArgsProduct({{32, 64, 128}, {15, 20, 30}})
    ->Unit(benchmark::kMillisecond);

void BM_PoincareDisk(benchmark::State& state) {
  const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poincare_constant(g, 2.0, 1.5).lambda);
}
BENCHMARK(BM_PoincareDisk)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HardyField(benchmark::State& state) {
  const auto w = solve_torsion(discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 64), 2.0).w;
  const auto hw = HardyWeights::build(w, 2.0);
  const auto u = TestFieldSuite(w, 1).field(0);
  for (auto _ : state) benchmark::DoNotOptimize(hardy_optimized(u, hw).lhs);
}
BENCHMARK(BM_HardyField)->Unit(benchmark::kMicrosecond);

void BM_YoungEstimate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(estimate_young_constant(3.0, 10000));
}
BENCHMARK(BM_YoungEstimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
