#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpptutor/analytics/statistics.hpp"

namespace {

void BM_MannWhitney(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& x : a) x = static_cast<double>(rng() % 100);
  for (auto& x : b) x = static_cast<double>(rng() % 100);
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::analytics::MannWhitneyU(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MannWhitney)->RangeMultiplier(4)->Range(8, 8192)->Complexity(benchmark::oNLogN);

}  // namespace
