#include <benchmark/benchmark.h>

#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/sim/corpus.hpp"
#include "gpptutor/sim/problem_generator.hpp"

namespace {

void BM_MineWalkthrough(benchmark::State& state) {
  const auto corpus = gpptutor::sim::WalkthroughCorpus(1);
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::gpp::MineSubgoals("walkthrough", corpus));
}
BENCHMARK(BM_MineWalkthrough);

void BM_MineGenerated(benchmark::State& state) {
  const auto level = static_cast<int>(state.range(0));
  const auto problem = gpptutor::sim::ProblemGenerator(3).Generate("bench", level,
                                                                   gpptutor::sim::ExpertStepsForLevel(level));
  const auto corpus = gpptutor::sim::GenerateCorpus(problem, 50, gpptutor::sim::CorpusProfile(), 9);
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::gpp::MineSubgoals(problem.id, corpus));
}
BENCHMARK(BM_MineGenerated)->DenseRange(3, 6);

void BM_BuildGpp(benchmark::State& state) {
  const auto problem = gpptutor::sim::WalkthroughProblem();
  const auto chunks = gpptutor::gpp::MineSubgoals(problem.id, gpptutor::sim::WalkthroughCorpus(1));
  const auto& catalog = gpptutor::logic::RuleCatalog::Standard();
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::gpp::BuildGpp(problem, chunks, catalog));
}
BENCHMARK(BM_BuildGpp);

}  // namespace
