#include "gpptutor/logic/rules.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace gpptutor::logic {

namespace {

using Out = std::vector<Formula>;
using UnaryPattern = void (*)(const Formula&, Out&);
using BinaryPattern = void (*)(const Formula&, const Formula&, Out&);

struct Semantics {
  UnaryPattern unary = nullptr;
  BinaryPattern binary = nullptr;  // called for (a, b) and (b, a)
};

// --- inference rules ---------------------------------------------------------

void ModusPonens(const Formula& a, const Formula& b, Out& out) {
  // a, a → q ⊢ q
  if (b.is(Connective::kImplies) && b.lhs() == a) out.push_back(b.rhs());
}

void ModusTollens(const Formula& a, const Formula& b, Out& out) {
  // p → q, ¬q ⊢ ¬p
  if (a.is(Connective::kImplies) && b.is_negation() && b.operand() == a.rhs()) {
    out.push_back(Formula::Not(a.lhs()));
  }
}

void DisjunctiveSyllogism(const Formula& a, const Formula& b, Out& out) {
  // p ∨ q, ¬p ⊢ q   and   p ∨ q, ¬q ⊢ p
  if (!a.is(Connective::kOr) || !b.is_negation()) return;
  if (b.operand() == a.lhs()) out.push_back(a.rhs());
  if (b.operand() == a.rhs()) out.push_back(a.lhs());
}

void HypotheticalSyllogism(const Formula& a, const Formula& b, Out& out) {
  // p → q, q → r ⊢ p → r
  if (a.is(Connective::kImplies) && b.is(Connective::kImplies) && a.rhs() == b.lhs()) {
    out.push_back(Formula::Implies(a.lhs(), b.rhs()));
  }
}

void Simplification(const Formula& a, Out& out) {
  if (a.is(Connective::kAnd)) {
    out.push_back(a.lhs());
    out.push_back(a.rhs());
  }
}

void Conjunction(const Formula& a, const Formula& b, Out& out) { out.push_back(Formula::And(a, b)); }

void ConstructiveDilemma(const Formula& a, const Formula& b, Out& out) {
  // (p → q) ∧ (r → s), p ∨ r ⊢ q ∨ s
  if (!a.is(Connective::kAnd) || !b.is(Connective::kOr)) return;
  const Formula& left = a.lhs();
  const Formula& right = a.rhs();
  if (left.is(Connective::kImplies) && right.is(Connective::kImplies) && b.lhs() == left.lhs() &&
      b.rhs() == right.lhs()) {
    out.push_back(Formula::Or(left.rhs(), right.rhs()));
  }
}

// --- equivalence rules, top level only ----------------------------------------

void DeMorgan(const Formula& a, Out& out) {
  if (a.is_negation() && a.operand().is_binary()) {
    const Formula& inner = a.operand();
    if (inner.connective() == Connective::kAnd) {
      out.push_back(Formula::Or(Formula::Not(inner.lhs()), Formula::Not(inner.rhs())));
    } else if (inner.connective() == Connective::kOr) {
      out.push_back(Formula::And(Formula::Not(inner.lhs()), Formula::Not(inner.rhs())));
    }
  }
  if ((a.is(Connective::kAnd) || a.is(Connective::kOr)) && a.lhs().is_negation() && a.rhs().is_negation()) {
    const Connective dual = a.connective() == Connective::kAnd ? Connective::kOr : Connective::kAnd;
    out.push_back(Formula::Not(Formula::Binary(dual, a.lhs().operand(), a.rhs().operand())));
  }
}

void DoubleNegation(const Formula& a, Out& out) {
  out.push_back(Formula::Not(Formula::Not(a)));
  if (a.is_negation() && a.operand().is_negation()) out.push_back(a.operand().operand());
}

void Commutativity(const Formula& a, Out& out) {
  if (a.is(Connective::kAnd) || a.is(Connective::kOr)) {
    out.push_back(Formula::Binary(a.connective(), a.rhs(), a.lhs()));
  }
}

void Implication(const Formula& a, Out& out) {
  // p → q ≡ ¬p ∨ q
  if (a.is(Connective::kImplies)) out.push_back(Formula::Or(Formula::Not(a.lhs()), a.rhs()));
  if (a.is(Connective::kOr) && a.lhs().is_negation()) out.push_back(Formula::Implies(a.lhs().operand(), a.rhs()));
}

const std::unordered_map<std::string, Semantics>& SemanticsTable() {
  static const std::unordered_map<std::string, Semantics> table = {
      {"MP", {nullptr, &ModusPonens}},
      {"MT", {nullptr, &ModusTollens}},
      {"DS", {nullptr, &DisjunctiveSyllogism}},
      {"HS", {nullptr, &HypotheticalSyllogism}},
      {"Simp", {&Simplification, nullptr}},
      {"Conj", {nullptr, &Conjunction}},
      {"Add", {nullptr, nullptr}},
      {"CD", {nullptr, &ConstructiveDilemma}},
      {"DeM", {&DeMorgan, nullptr}},
      {"DN", {&DoubleNegation, nullptr}},
      {"Comm", {&Commutativity, nullptr}},
      {"Impl", {&Implication, nullptr}},
  };
  return table;
}

const Semantics& SemanticsFor(const Rule& rule) {
  const auto& table = SemanticsTable();
  auto it = table.find(rule.id);
  if (it == table.end()) throw UnknownRuleError("no semantics registered for rule '" + rule.id + "'");
  return it->second;
}

void CheckArity(const Rule& rule, std::span<const Formula> premises) {
  if (static_cast<int>(premises.size()) != rule.arity) {
    throw ArityError("rule " + rule.id + " takes " + std::to_string(rule.arity) + " premise(s), got " +
                     std::to_string(premises.size()));
  }
}

void SortUnique(Out& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

RuleKind KindFromString(std::string_view s) {
  if (s == "inference") return RuleKind::kInference;
  if (s == "equivalence") return RuleKind::kEquivalence;
  throw std::invalid_argument("unknown rule kind '" + std::string(s) + "'");
}

}  // namespace

std::string_view ToString(RuleKind kind) { return kind == RuleKind::kInference ? "inference" : "equivalence"; }

RuleCatalog::RuleCatalog(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string> seen;
  for (const auto& r : rules_) {
    if (r.id.empty()) throw std::invalid_argument("rule id must not be empty");
    if (!seen.insert(r.id).second) throw std::invalid_argument("duplicate rule id '" + r.id + "'");
    if (r.arity != 1 && r.arity != 2) throw std::invalid_argument("rule " + r.id + " must take 1 or 2 premises");
    const Semantics& s = SemanticsFor(r);
    const bool shape_ok = r.id == "Add" ? r.arity == 1 : (r.arity == 1 ? s.unary != nullptr : s.binary != nullptr);
    if (!shape_ok) throw std::invalid_argument("rule " + r.id + " declared with the wrong arity");
  }
}

const RuleCatalog& RuleCatalog::Standard() {
  static const RuleCatalog catalog({
      {"MP", "Modus Ponens", 2, RuleKind::kInference, false, "elimination", "detach"},
      {"MT", "Modus Tollens", 2, RuleKind::kInference, false, "elimination", "deny the antecedent and derive"},
      {"DS", "Disjunctive Syllogism", 2, RuleKind::kInference, false, "elimination", "eliminate a disjunct and keep"},
      {"HS", "Hypothetical Syllogism", 2, RuleKind::kInference, false, "elimination", "chain the implications into"},
      {"Simp", "Simplification", 1, RuleKind::kInference, false, "elimination", "isolate"},
      {"Conj", "Conjunction", 2, RuleKind::kInference, false, "introduction", "combine the statements into"},
      {"Add", "Addition", 1, RuleKind::kInference, true, "introduction", "introduce a disjunct and form"},
      {"CD", "Constructive Dilemma", 2, RuleKind::kInference, false, "elimination", "split the cases into"},
      {"DeM", "De Morgan", 1, RuleKind::kEquivalence, false, "equivalence", "move the negation and get"},
      {"DN", "Double Negation", 1, RuleKind::kEquivalence, false, "equivalence", "rewrite the statement as"},
      {"Comm", "Commutativity", 1, RuleKind::kEquivalence, false, "equivalence", "swap the sides to get"},
      {"Impl", "Implication", 1, RuleKind::kEquivalence, false, "equivalence", "rewrite the implication as"},
  });
  return catalog;
}

const Rule* RuleCatalog::Find(std::string_view id) const {
  auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.id == id; });
  return it == rules_.end() ? nullptr : &*it;
}

const Rule& RuleCatalog::At(std::string_view id) const {
  if (const Rule* r = Find(id)) return *r;
  throw UnknownRuleError("unknown rule '" + std::string(id) + "'");
}

RuleCatalog RuleCatalog::Restrict(std::span<const std::string> ids) const {
  std::vector<Rule> subset;
  for (const auto& id : ids) subset.push_back(At(id));
  return RuleCatalog(std::move(subset));
}

nlohmann::json RuleCatalog::ToJson() const {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : rules_) {
    rules.push_back({{"id", r.id},
                     {"name", r.name},
                     {"arity", r.arity},
                     {"kind", ToString(r.kind)},
                     {"target_dependent", r.target_dependent},
                     {"family", r.family},
                     {"action", r.action}});
  }
  return {{"version", 1}, {"rules", std::move(rules)}};
}

RuleCatalog RuleCatalog::FromJson(const nlohmann::json& j) {
  std::vector<Rule> rules;
  for (const auto& r : j.at("rules")) {
    Rule rule;
    rule.id = r.at("id").get<std::string>();
    const Rule* standard = Standard().Find(rule.id);
    rule.name = r.value("name", standard ? standard->name : rule.id);
    rule.arity = r.value("arity", standard ? standard->arity : 1);
    rule.kind = KindFromString(r.value("kind", std::string(ToString(standard ? standard->kind : RuleKind::kInference))));
    rule.target_dependent = rule.id == "Add";
    rule.family = r.value("family", standard ? standard->family : std::string("other"));
    rule.action = r.value("action", standard ? standard->action : std::string("derive"));
    rules.push_back(std::move(rule));
  }
  return RuleCatalog(std::move(rules));
}

bool Derivations::Contains(const Formula& f) const { return std::binary_search(conclusions.begin(), conclusions.end(), f); }

Derivations ApplyForward(const Rule& rule, std::span<const Formula> premises) {
  CheckArity(rule, premises);
  Derivations result;
  if (rule.id == "Add") {
    result.requires_target = true;
    return result;
  }
  const Semantics& s = SemanticsFor(rule);
  if (rule.arity == 1) {
    s.unary(premises[0], result.conclusions);
  } else {
    s.binary(premises[0], premises[1], result.conclusions);
    s.binary(premises[1], premises[0], result.conclusions);
  }
  SortUnique(result.conclusions);
  return result;
}

bool CheckJustification(const Formula& conclusion, const Rule& rule, std::span<const Formula> premises) {
  CheckArity(rule, premises);
  if (rule.id == "Add") {
    return conclusion.is(Connective::kOr) && (conclusion.lhs() == premises[0] || conclusion.rhs() == premises[0]);
  }
  return ApplyForward(rule, premises).Contains(conclusion);
}

bool RuleApplies(const Rule& rule, std::span<const Formula> premises) {
  CheckArity(rule, premises);
  if (rule.id == "Add") return true;
  return !ApplyForward(rule, premises).conclusions.empty();
}

}  // namespace gpptutor::logic
