#include "gpptutor/proof/problem.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gpptutor/logic/entailment.hpp"
#include "gpptutor/logic/parser.hpp"

namespace gpptutor::proof {

namespace {

ProofError Invalid(const std::string& what) { return ProofError(ProofError::Code::kInvalidSolution, what); }

}  // namespace

std::string_view ToString(NodeOrigin origin) {
  switch (origin) {
    case NodeOrigin::kGiven: return "given";
    case NodeOrigin::kDerived: return "derived";
    case NodeOrigin::kProvided: return "provided";
  }
  return "?";
}

NodeOrigin NodeOriginFromString(std::string_view s) {
  if (s == "given") return NodeOrigin::kGiven;
  if (s == "derived") return NodeOrigin::kDerived;
  if (s == "provided") return NodeOrigin::kProvided;
  throw std::invalid_argument("unknown node origin '" + std::string(s) + "'");
}

const ProofNode* SolutionGraph::Find(const NodeId& id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const ProofNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const ProofNode& SolutionGraph::conclusion_node() const {
  const ProofNode* n = Find(conclusion);
  if (n == nullptr) throw Invalid("solution has no conclusion node '" + conclusion + "'");
  return *n;
}

std::size_t SolutionGraph::derived_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const ProofNode& n) { return n.origin != NodeOrigin::kGiven; }));
}

std::vector<NodeId> SolutionGraph::TopologicalOrder() const {
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index.emplace(nodes[i].id, i).second) throw Invalid("duplicate node id '" + nodes[i].id + "'");
  }
  std::vector<int> pending(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> children(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].justification) continue;
    for (const auto& p : nodes[i].justification->parents) {
      auto it = index.find(p);
      if (it == index.end()) throw Invalid("node '" + nodes[i].id + "' cites unknown parent '" + p + "'");
      children[it->second].push_back(i);
      ++pending[i];
    }
  }
  // Kahn's algorithm; the ready set is ordered by position so the result is stable.
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  std::vector<NodeId> order;
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    ++visited;
    if (nodes[i].origin != NodeOrigin::kGiven) order.push_back(nodes[i].id);
    for (std::size_t c : children[i]) {
      if (--pending[c] == 0) ready.insert(c);
    }
  }
  if (visited != nodes.size()) throw ProofError(ProofError::Code::kCycle, "solution graph has a cycle");
  return order;
}

void SolutionGraph::Validate(const logic::RuleCatalog& catalog) const {
  (void)TopologicalOrder();
  std::set<std::string> statements;
  for (const auto& n : nodes) {
    if (!statements.insert(logic::FormatFormula(n.statement)).second) {
      throw Invalid("statement " + logic::FormatFormula(n.statement) + " appears twice");
    }
    if (n.origin == NodeOrigin::kGiven) {
      if (n.justification) throw Invalid("given node '" + n.id + "' has a justification");
      continue;
    }
    if (!n.justification) throw Invalid("node '" + n.id + "' is not justified");
    const logic::Rule* rule = catalog.Find(n.justification->rule);
    if (rule == nullptr) throw Invalid("node '" + n.id + "' uses unknown rule '" + n.justification->rule + "'");
    std::vector<logic::Formula> premises;
    for (const auto& p : n.justification->parents) premises.push_back(Find(p)->statement);
    if (static_cast<int>(premises.size()) != rule->arity ||
        !logic::CheckJustification(n.statement, *rule, premises)) {
      throw Invalid("node '" + n.id + "' is not licensed by " + rule->id);
    }
  }
  (void)conclusion_node();
}

void Problem::Validate(const logic::RuleCatalog& catalog) const {
  auto invalid = [&](const std::string& what) {
    return ProofError(ProofError::Code::kInvalidProblem, "problem " + id + ": " + what);
  };
  if (premises.empty()) throw invalid("no premises");
  if (level < 1 || level > 7) throw invalid("level must be in 1..7");
  if (std::find(premises.begin(), premises.end(), conclusion) != premises.end()) {
    throw invalid("conclusion is one of the premises");
  }
  if (!logic::Entails(premises, conclusion)) throw invalid("premises do not entail the conclusion");
  if (!solution) return;
  solution->Validate(catalog);
  if (!(solution->conclusion_node().statement == conclusion)) throw invalid("solution proves a different statement");
  std::size_t givens = 0;
  for (const auto& n : solution->nodes) {
    if (n.origin != NodeOrigin::kGiven) continue;
    if (givens >= premises.size() || !(premises[givens] == n.statement) || n.id != GivenId(givens)) {
      throw invalid("solution givens do not match the premises");
    }
    ++givens;
  }
  if (givens != premises.size()) throw invalid("solution givens do not match the premises");
}

SolutionGraph MakeSolution(std::span<const logic::Formula> premises, std::span<const SolutionStep> steps) {
  SolutionGraph g;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    g.nodes.push_back({Problem::GivenId(i), premises[i], NodeOrigin::kGiven, std::nullopt});
  }
  for (const auto& s : steps) {
    g.nodes.push_back({s.id, s.statement, NodeOrigin::kDerived, Justification{s.rule, s.parents}});
  }
  if (steps.empty()) throw Invalid("solution needs at least one step");
  g.conclusion = steps.back().id;
  return g;
}

}  // namespace gpptutor::proof
