#pragma once

#include <cstdint>
#include <string>

#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/problem.hpp"
#include "gpptutor/sim/profile.hpp"

namespace gpptutor::sim {

/// Builds random problems with an expert solution by expanding the
/// conclusion backward. Every expansion introduces fresh variables, so
/// statements never repeat. Problems from level 3 on combine two independent
/// derivations at the conclusion.
class ProblemGenerator {
 public:
  explicit ProblemGenerator(std::uint64_t seed, const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

  /// A validated problem whose expert solution has exactly `derived_steps`
  /// derivations. Throws SimulationError when no valid problem is found.
  proof::Problem Generate(const std::string& id, int level, int derived_steps);

 private:
  SimRng rng_;
  const logic::RuleCatalog& catalog_;
};

/// Expert derivations per problem at each curriculum level (1..7).
int ExpertStepsForLevel(int level);

/// F ∧ ¬H, F → (G ∧ ¬H), H ∨ J ⊢ J ∨ K. The expert solution reaches ¬H
/// through G ∧ ¬H.
proof::Problem WalkthroughProblem();

/// Second route for the walkthrough problem: ¬H straight from F ∧ ¬H.
proof::SolutionGraph WalkthroughShortcutSolution();

/// A ∧ B, B → C, D ∧ E, E → F ⊢ C ∧ F: two independent two-step derivations
/// joined by Conjunction.
proof::Problem TwoBranchProblem();

}  // namespace gpptutor::sim
