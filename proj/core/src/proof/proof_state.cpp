#include "gpptutor/proof/proof_state.hpp"

#include <algorithm>
#include <deque>

#include "gpptutor/logic/parser.hpp"

namespace gpptutor::proof {

namespace {

using Code = ProofError::Code;

}  // namespace

std::string_view ToString(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

std::string_view ToString(Outcome o) {
  switch (o) {
    case Outcome::kCorrect: return "correct";
    case Outcome::kIncorrectRule: return "incorrect-rule";
    case Outcome::kIncorrectStatement: return "incorrect-statement";
  }
  return "?";
}

Direction DirectionFromString(std::string_view s) {
  if (s == "forward") return Direction::kForward;
  if (s == "backward") return Direction::kBackward;
  throw std::invalid_argument("unknown direction '" + std::string(s) + "'");
}

Outcome OutcomeFromString(std::string_view s) {
  if (s == "correct") return Outcome::kCorrect;
  if (s == "incorrect-rule") return Outcome::kIncorrectRule;
  if (s == "incorrect-statement") return Outcome::kIncorrectStatement;
  throw std::invalid_argument("unknown outcome '" + std::string(s) + "'");
}

ProofState::ProofState(std::string problem_id, logic::Formula conclusion, Timestamp start)
    : problem_id_(std::move(problem_id)), conclusion_(std::move(conclusion)), start_(start) {}

ProofState ProofState::ForProblem(const Problem& problem, Timestamp start) {
  ProofState s(problem.id, problem.conclusion, start);
  for (std::size_t i = 0; i < problem.premises.size(); ++i) {
    s.Append({Problem::GivenId(i), problem.premises[i], NodeOrigin::kGiven, std::nullopt});
  }
  s.Append({"C", problem.conclusion, NodeOrigin::kProvided, std::nullopt});
  return s;
}

ProofState ProofState::WithNodes(std::string problem_id, logic::Formula conclusion, std::vector<ProofNode> nodes,
                                 Timestamp start) {
  ProofState s(std::move(problem_id), std::move(conclusion), start);
  for (auto& n : nodes) {
    if (n.origin == NodeOrigin::kGiven && n.justification) {
      throw ProofError(Code::kInvalidRequest, "given node '" + n.id + "' cannot carry a justification");
    }
    s.Append(std::move(n));
  }
  for (const auto& n : s.nodes_) {
    if (!n.justification) continue;
    for (const auto& p : n.justification->parents) {
      if (!s.index_.contains(p)) throw ProofError(Code::kUnknownNode, "unknown parent '" + p + "'");
    }
  }
  return s;
}

const ProofNode* ProofState::Find(const NodeId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t ProofState::IndexOf(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ProofError(Code::kUnknownNode, "unknown node '" + id + "'");
  return it->second;
}

void ProofState::Append(ProofNode node) {
  if (!index_.emplace(node.id, nodes_.size()).second) {
    throw ProofError(Code::kInvalidRequest, "duplicate node id '" + node.id + "'");
  }
  if (node.origin == NodeOrigin::kGiven) next_label_ = std::max(next_label_, static_cast<int>(nodes_.size()) + 2);
  nodes_.push_back(std::move(node));
}

NodeId ProofState::FreshId() {
  while (index_.contains(std::to_string(next_label_))) ++next_label_;
  return std::to_string(next_label_++);
}

std::vector<logic::Formula> ProofState::Statements(const std::vector<NodeId>& ids) const {
  std::vector<logic::Formula> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(nodes_[IndexOf(id)].statement);
  return out;
}

bool ProofState::Reaches(const NodeId& ancestor, const NodeId& descendant) const {
  const std::size_t from = IndexOf(ancestor);
  const std::size_t to = IndexOf(descendant);
  if (from == to) return true;
  std::vector<std::vector<std::size_t>> children(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].justification) continue;
    for (const auto& p : nodes_[i].justification->parents) children[index_.at(p)].push_back(i);
  }
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t c : children[i]) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return false;
}

void ProofState::Record(StepAttempt attempt) {
  if (attempt.correct() && !completed_ && IsComplete()) completed_ = attempt.timestamp;
  history_.push_back(std::move(attempt));
}

StepAttempt ProofState::DeriveForward(const logic::RuleCatalog& catalog, const StepRequest& request, Timestamp t) {
  if (request.direction != Direction::kForward || !request.declared) {
    throw ProofError(Code::kInvalidRequest, "forward step needs a declared statement");
  }
  std::vector<NodeId> parent_ids;
  for (const auto& ref : request.parents) {
    const NodeId* id = std::get_if<NodeId>(&ref);
    if (id == nullptr) throw ProofError(Code::kInvalidRequest, "forward steps cannot hypothesize parents");
    const ProofNode& parent = nodes_[IndexOf(*id)];
    if (parent.origin != NodeOrigin::kGiven && !parent.justified()) {
      throw ProofError(Code::kUnjustifiedParent, "parent '" + *id + "' is not justified");
    }
    parent_ids.push_back(*id);
  }
  const logic::Rule& rule = catalog.At(request.rule);
  const auto premises = Statements(parent_ids);
  const logic::Formula& declared = *request.declared;

  StepAttempt attempt{t, request, Outcome::kCorrect, {}, false};
  if (!logic::CheckJustification(declared, rule, premises)) {
    attempt.outcome = logic::RuleApplies(rule, premises) ? Outcome::kIncorrectStatement : Outcome::kIncorrectRule;
    Record(std::move(attempt));
    return history_.back();
  }

  std::optional<std::size_t> target;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const ProofNode& n = nodes_[i];
    if (!(n.statement == declared)) continue;
    if (n.origin == NodeOrigin::kGiven || n.justified()) {
      attempt.duplicate = true;
      continue;
    }
    if (target) continue;
    const bool cycle = std::any_of(parent_ids.begin(), parent_ids.end(),
                                   [&](const NodeId& p) { return Reaches(n.id, p); });
    if (!cycle) target = i;
  }
  Justification j{rule.id, parent_ids};
  if (target) {
    nodes_[*target].justification = std::move(j);
    attempt.node = nodes_[*target].id;
  } else {
    attempt.node = FreshId();
    Append({attempt.node, declared, NodeOrigin::kDerived, std::move(j)});
  }
  Record(std::move(attempt));
  return history_.back();
}

StepAttempt ProofState::HypothesizeBackward(const logic::RuleCatalog& catalog, const StepRequest& request,
                                            Timestamp t) {
  if (request.direction != Direction::kBackward) throw ProofError(Code::kInvalidRequest, "not a backward step");
  const ProofNode& target = nodes_[IndexOf(request.target)];
  if (target.origin == NodeOrigin::kGiven || target.justified()) {
    throw ProofError(Code::kAlreadyJustified, "node '" + target.id + "' is already justified");
  }
  std::vector<logic::Formula> premises;
  for (const auto& ref : request.parents) {
    if (const NodeId* id = std::get_if<NodeId>(&ref)) {
      const ProofNode& parent = nodes_[IndexOf(*id)];
      if (Reaches(target.id, parent.id)) {
        throw ProofError(Code::kCycle, "justifying '" + target.id + "' from '" + parent.id + "' creates a cycle");
      }
      premises.push_back(parent.statement);
    } else {
      premises.push_back(std::get<logic::Formula>(ref));
    }
  }
  const logic::Rule& rule = catalog.At(request.rule);

  StepAttempt attempt{t, request, Outcome::kCorrect, {}, false};
  if (!logic::CheckJustification(target.statement, rule, premises)) {
    attempt.outcome = logic::RuleApplies(rule, premises) ? Outcome::kIncorrectStatement : Outcome::kIncorrectRule;
    Record(std::move(attempt));
    return history_.back();
  }

  const NodeId target_id = target.id;
  Justification j{rule.id, {}};
  for (const auto& ref : request.parents) {
    if (const NodeId* id = std::get_if<NodeId>(&ref)) {
      j.parents.push_back(*id);
    } else {
      NodeId fresh = FreshId();
      Append({fresh, std::get<logic::Formula>(ref), NodeOrigin::kDerived, std::nullopt});
      j.parents.push_back(std::move(fresh));
    }
  }
  nodes_[IndexOf(target_id)].justification = std::move(j);
  attempt.node = target_id;
  Record(std::move(attempt));
  return history_.back();
}

StepAttempt ProofState::Submit(const logic::RuleCatalog& catalog, const StepRequest& request, Timestamp t) {
  return request.direction == Direction::kForward ? DeriveForward(catalog, request, t)
                                                  : HypothesizeBackward(catalog, request, t);
}

bool ProofState::IsComplete() const {
  // 0 = unknown, 1 = in progress, 2 = grounded, 3 = not grounded
  std::vector<char> state(nodes_.size(), 0);
  auto grounded = [&](auto&& self, std::size_t i) -> bool {
    if (state[i] == 2) return true;
    if (state[i] == 3 || state[i] == 1) return false;
    const ProofNode& n = nodes_[i];
    if (n.origin == NodeOrigin::kGiven) {
      state[i] = 2;
      return true;
    }
    if (!n.justification) {
      state[i] = 3;
      return false;
    }
    state[i] = 1;
    bool ok = true;
    for (const auto& p : n.justification->parents) ok = ok && self(self, index_.at(p));
    state[i] = ok ? 2 : 3;
    return ok;
  };
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].statement == conclusion_ && nodes_[i].origin != NodeOrigin::kGiven && grounded(grounded, i)) {
      return true;
    }
  }
  return false;
}

ProofState ReplayLog(ProofState initial, std::span<const StepAttempt> attempts, const logic::RuleCatalog& catalog) {
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    const StepAttempt& logged = attempts[i];
    StepAttempt replayed;
    try {
      replayed = initial.Submit(catalog, logged.request, logged.timestamp);
    } catch (const std::exception& e) {
      throw ReplayError(i, e.what());
    }
    if (replayed.outcome != logged.outcome) {
      throw ReplayError(i, "logged outcome " + std::string(ToString(logged.outcome)) + " but engine computed " +
                               std::string(ToString(replayed.outcome)));
    }
    if (replayed.node != logged.node || replayed.duplicate != logged.duplicate) {
      throw ReplayError(i, "logged node '" + logged.node + "' but engine produced '" + replayed.node + "'");
    }
  }
  return initial;
}

ProofState ReplayLog(const Problem& problem, std::span<const StepAttempt> attempts, const logic::RuleCatalog& catalog,
                     Timestamp start) {
  return ReplayLog(ProofState::ForProblem(problem, start), attempts, catalog);
}

}  // namespace gpptutor::proof
