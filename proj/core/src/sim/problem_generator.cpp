#include "gpptutor/sim/problem_generator.hpp"

#include <set>
#include <vector>

#include "gpptutor/logic/parser.hpp"

namespace gpptutor::sim {

namespace {

using logic::Formula;
using proof::NodeId;
using proof::SolutionStep;

constexpr int kMaxTries = 64;

class Builder {
 public:
  explicit Builder(SimRng& rng) : rng_(rng) {}

  Formula Fresh() {
    std::vector<char> free;
    for (char c = 'A'; c <= 'Z'; ++c) {
      if ((used_ & (1u << (c - 'A'))) == 0) free.push_back(c);
    }
    if (free.empty()) throw SimulationError("problem generator ran out of variables");
    const char c = free[rng_.Below(free.size())];
    used_ |= 1u << (c - 'A');
    return Formula::Variable(c);
  }

  NodeId Premise(Formula f) {
    premises_.push_back(std::move(f));
    return proof::Problem::GivenId(premises_.size() - 1);
  }

  NodeId Step(Formula statement, std::string rule, std::vector<NodeId> parents) {
    NodeId id = "s" + std::to_string(steps_.size() + 1);
    steps_.push_back({id, std::move(statement), std::move(rule), std::move(parents)});
    return id;
  }

  /// Node holding `goal`, derived in exactly `budget` steps (a premise when
  /// the budget is zero).
  NodeId Derive(const Formula& goal, int budget) {
    if (budget == 0) return Premise(goal);
    std::vector<std::string> options = {"MP", "Simp", "DS"};
    if (goal.is_negation()) options.push_back("MT");
    if (goal.is(logic::Connective::kImplies)) options.push_back("HS");
    if (goal.is(logic::Connective::kOr)) options.push_back("Add");
    const std::string rule = options[rng_.Below(options.size())];

    if (rule == "MP") {
      const Formula p = Fresh();
      const NodeId from = Derive(p, budget - 1);
      const NodeId implication = Premise(Formula::Implies(p, goal));
      return Step(goal, rule, {from, implication});
    }
    if (rule == "Simp") {
      const NodeId from = Derive(Formula::And(goal, Fresh()), budget - 1);
      return Step(goal, rule, {from});
    }
    if (rule == "DS") {
      const Formula p = Fresh();
      const NodeId from = Derive(Formula::Or(p, goal), budget - 1);
      const NodeId negation = Premise(Formula::Not(p));
      return Step(goal, rule, {from, negation});
    }
    if (rule == "MT") {
      const Formula q = Fresh();
      const NodeId implication = Premise(Formula::Implies(goal.operand(), q));
      const NodeId from = Derive(Formula::Not(q), budget - 1);
      return Step(goal, rule, {implication, from});
    }
    if (rule == "HS") {
      const Formula m = Fresh();
      const NodeId from = Derive(Formula::Implies(goal.lhs(), m), budget - 1);
      const NodeId implication = Premise(Formula::Implies(m, goal.rhs()));
      return Step(goal, rule, {from, implication});
    }
    const NodeId from = Derive(goal.lhs(), budget - 1);
    return Step(goal, "Add", {from});
  }

  /// Conclusion justified from two derived parents with `budget` steps in total.
  void TwoBranches(int budget) {
    const int rest = budget - 1;
    const int left = 1 + static_cast<int>(rng_.Below(static_cast<std::size_t>(rest - 1)));
    const int right = rest - left;
    switch (rng_.Below(3)) {
      case 0: {
        const Formula x = Fresh();
        const Formula y = Fresh();
        const NodeId a = Derive(x, left);
        const NodeId b = Derive(y, right);
        Step(Formula::And(x, y), "Conj", {a, b});
        break;
      }
      case 1: {
        const Formula p = Fresh();
        const Formula z = Fresh();
        const NodeId a = Derive(Formula::Or(p, z), left);
        const NodeId b = Derive(Formula::Not(p), right);
        Step(z, "DS", {a, b});
        break;
      }
      default: {
        const Formula p = Fresh();
        const Formula z = Fresh();
        const NodeId a = Derive(p, left);
        const NodeId b = Derive(Formula::Implies(p, z), right);
        Step(z, "MP", {a, b});
        break;
      }
    }
  }

  void Chain(int budget) { Derive(Fresh(), budget); }

  const std::vector<Formula>& premises() const { return premises_; }
  const std::vector<SolutionStep>& steps() const { return steps_; }

 private:
  SimRng& rng_;
  std::uint32_t used_ = 0;
  std::vector<Formula> premises_;
  std::vector<SolutionStep> steps_;
};

bool StatementsDistinct(const std::vector<Formula>& premises, const std::vector<SolutionStep>& steps) {
  std::set<Formula> seen(premises.begin(), premises.end());
  if (seen.size() != premises.size()) return false;
  for (const auto& s : steps) {
    if (!seen.insert(s.statement).second) return false;
  }
  return true;
}

proof::Problem FromText(std::string id, int level, const std::vector<std::string>& premises,
                        const std::string& conclusion, const std::vector<SolutionStep>& steps) {
  proof::Problem p{std::move(id), level, {}, logic::ParseFormula(conclusion), std::nullopt};
  for (const auto& text : premises) p.premises.push_back(logic::ParseFormula(text));
  p.solution = proof::MakeSolution(p.premises, steps);
  return p;
}

SolutionStep S(std::string id, const std::string& statement, std::string rule, std::vector<NodeId> parents) {
  return {std::move(id), logic::ParseFormula(statement), std::move(rule), std::move(parents)};
}

}  // namespace

ProblemGenerator::ProblemGenerator(std::uint64_t seed, const logic::RuleCatalog& catalog)
    : rng_(seed), catalog_(catalog) {}

proof::Problem ProblemGenerator::Generate(const std::string& id, int level, int derived_steps) {
  if (derived_steps < 1) throw SimulationError("a generated problem needs at least one derivation");
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    Builder b(rng_);
    if (level >= 3 && derived_steps >= 3) {
      b.TwoBranches(derived_steps);
    } else {
      b.Chain(derived_steps);
    }
    if (!StatementsDistinct(b.premises(), b.steps())) continue;
    proof::Problem p{id, level, b.premises(), b.steps().back().statement, std::nullopt};
    try {
      p.solution = proof::MakeSolution(p.premises, b.steps());
      p.Validate(catalog_);
    } catch (const proof::ProofError&) {
      continue;
    }
    return p;
  }
  throw SimulationError("could not generate a valid problem for " + id);
}

int ExpertStepsForLevel(int level) {
  if (level < 1 || level > 7) throw SimulationError("level must be in 1..7");
  return level + 2;
}

proof::Problem WalkthroughProblem() {
  return FromText("walkthrough", 2, {"F ^ ~H", "F -> (G ^ ~H)", "H v J"}, "J v K",
                  {S("s1", "F", "Simp", {"1"}), S("s2", "G ^ ~H", "MP", {"s1", "2"}), S("s3", "~H", "Simp", {"s2"}),
                   S("s4", "J", "DS", {"3", "s3"}), S("s5", "J v K", "Add", {"s4"})});
}

proof::SolutionGraph WalkthroughShortcutSolution() {
  const proof::Problem p = WalkthroughProblem();
  const std::vector<SolutionStep> steps = {S("s1", "F", "Simp", {"1"}), S("s2", "G ^ ~H", "MP", {"s1", "2"}),
                                           S("s3", "~H", "Simp", {"1"}), S("s4", "J", "DS", {"3", "s3"}),
                                           S("s5", "J v K", "Add", {"s4"})};
  return proof::MakeSolution(p.premises, steps);
}

proof::Problem TwoBranchProblem() {
  return FromText("two-branch", 3, {"A ^ B", "B -> C", "D ^ E", "E -> F"}, "C ^ F",
                  {S("s1", "B", "Simp", {"1"}), S("s2", "C", "MP", {"s1", "2"}), S("s3", "E", "Simp", {"3"}),
                   S("s4", "F", "MP", {"s3", "4"}), S("s5", "C ^ F", "Conj", {"s2", "s4"})});
}

}  // namespace gpptutor::sim
