#include "gpptutor/logic/entailment.hpp"

#include <bit>
#include <optional>
#include <string>

namespace gpptutor::logic {

std::optional<Assignment> FindCountermodel(std::span<const Formula> premises, const Formula& conclusion) {
  std::uint32_t mask = conclusion.variables();
  for (const auto& p : premises) mask |= p.variables();
  const int n = std::popcount(mask);
  if (n > kMaxTruthTableVariables) {
    throw VariableBudgetError("truth table needs " + std::to_string(n) + " variables, limit is " +
                              std::to_string(kMaxTruthTableVariables));
  }
  const std::uint64_t rows = std::uint64_t{1} << n;
  for (std::uint64_t row = 0; row < rows; ++row) {
    const Assignment a = Assignment::FromRow(mask, row);
    bool premises_hold = true;
    for (const auto& p : premises) {
      if (!p.Evaluate(a)) {
        premises_hold = false;
        break;
      }
    }
    if (premises_hold && !conclusion.Evaluate(a)) return a;
  }
  return std::nullopt;
}

bool Entails(std::span<const Formula> premises, const Formula& conclusion) {
  return !FindCountermodel(premises, conclusion).has_value();
}

}  // namespace gpptutor::logic
