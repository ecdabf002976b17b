#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "gpptutor/logic/formula.hpp"

namespace gpptutor::logic {

inline constexpr int kMaxTruthTableVariables = 20;

class VariableBudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truth-table entailment: every row satisfying all premises satisfies the
/// conclusion. Throws VariableBudgetError past kMaxTruthTableVariables.
bool Entails(std::span<const Formula> premises, const Formula& conclusion);

/// First countermodel found, if any. Same budget as Entails.
std::optional<Assignment> FindCountermodel(std::span<const Formula> premises, const Formula& conclusion);

}  // namespace gpptutor::logic
