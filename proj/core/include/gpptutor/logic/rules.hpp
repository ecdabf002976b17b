#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/logic/formula.hpp"

namespace gpptutor::logic {

enum class RuleKind { kInference, kEquivalence };

struct Rule {
  std::string id;      // stable short code, e.g. "Simp"
  std::string name;    // display name, e.g. "Simplification"
  int arity = 1;       // number of premises, 1 or 2
  RuleKind kind = RuleKind::kInference;
  bool target_dependent = false;  // conclusions cannot be enumerated (Addition)
  std::string family;             // grouping used by error profiles
  std::string action;             // hint phrase: "Apply <name> here to <action> <statement>."
};

class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownRuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered, id-unique set of rules. Rule semantics are bound by id, so a
/// catalog may be any subset of the standard rules with edited names or
/// hint phrases.
class RuleCatalog {
 public:
  explicit RuleCatalog(std::vector<Rule> rules);

  /// Modus Ponens, Modus Tollens, Disjunctive Syllogism, Hypothetical
  /// Syllogism, Simplification, Conjunction, Addition, Constructive Dilemma,
  /// De Morgan, Double Negation, Commutativity, Implication.
  static const RuleCatalog& Standard();

  const Rule* Find(std::string_view id) const;
  const Rule& At(std::string_view id) const;
  std::span<const Rule> rules() const { return rules_; }

  RuleCatalog Restrict(std::span<const std::string> ids) const;

  nlohmann::json ToJson() const;
  static RuleCatalog FromJson(const nlohmann::json& j);

 private:
  std::vector<Rule> rules_;
};

/// Result of applying a rule forwards. Target-dependent rules set
/// `requires_target` and leave `conclusions` empty.
struct Derivations {
  bool requires_target = false;
  std::vector<Formula> conclusions;  // sorted, unique

  bool Contains(const Formula& f) const;
};

/// Every conclusion the rule licenses from exactly these premises. Two-premise
/// rules try both premise orders. Throws ArityError on a premise-count mismatch.
Derivations ApplyForward(const Rule& rule, std::span<const Formula> premises);

/// True iff `rule` applied to `premises` licenses `conclusion`.
bool CheckJustification(const Formula& conclusion, const Rule& rule, std::span<const Formula> premises);

/// True iff the rule licenses at least one conclusion from the premises.
/// Addition applies to any premise.
bool RuleApplies(const Rule& rule, std::span<const Formula> premises);

std::string_view ToString(RuleKind kind);

}  // namespace gpptutor::logic
