#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpptutor/logic/entailment.hpp"
#include "gpptutor/logic/parser.hpp"
#include "gpptutor/logic/rules.hpp"

namespace {

using gpptutor::logic::Formula;
using gpptutor::logic::ParseFormula;

void BM_Parse(benchmark::State& state) {
  const std::string text = "((P -> Q) ^ (R -> S)) ^ (P v R) <-> ~(~Q ^ ~S) v (T -> ~U)";
  for (auto _ : state) benchmark::DoNotOptimize(ParseFormula(text));
}
BENCHMARK(BM_Parse);

void BM_FormatRoundTrip(benchmark::State& state) {
  const Formula f = ParseFormula("((P -> Q) ^ (R -> S)) ^ (P v R) <-> ~(~Q ^ ~S) v (T -> ~U)");
  for (auto _ : state) benchmark::DoNotOptimize(ParseFormula(gpptutor::logic::FormatFormula(f)));
}
BENCHMARK(BM_FormatRoundTrip);

void BM_Entails(benchmark::State& state) {
  std::vector<Formula> premises;
  std::string letters = "ABCDEFGHIJKLMNOPQRST";
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    premises.push_back(ParseFormula(std::string(1, letters[i]) + " -> " + letters[i + 1]));
  }
  premises.push_back(ParseFormula("A"));
  const Formula conclusion = ParseFormula(std::string(1, letters[n - 1]));
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::logic::Entails(premises, conclusion));
}
BENCHMARK(BM_Entails)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_CheckJustification(benchmark::State& state) {
  const auto& rule = gpptutor::logic::RuleCatalog::Standard().At("CD");
  const std::vector<Formula> premises = {ParseFormula("(P -> Q) ^ (R -> S)"), ParseFormula("P v R")};
  const Formula conclusion = ParseFormula("Q v S");
  for (auto _ : state) benchmark::DoNotOptimize(gpptutor::logic::CheckJustification(conclusion, rule, premises));
}
BENCHMARK(BM_CheckJustification);

}  // namespace
