#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gpptutor/logic/formula.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/problem.hpp"

namespace gpptutor::proof {

enum class Direction { kForward, kBackward };

enum class Outcome { kCorrect, kIncorrectRule, kIncorrectStatement };

/// A parent named in a step: an existing node, or (backward steps only) a new
/// statement hypothesized as an unjustified parent.
using ParentRef = std::variant<NodeId, logic::Formula>;

struct StepRequest {
  Direction direction = Direction::kForward;
  std::string rule;
  std::vector<ParentRef> parents;
  std::optional<logic::Formula> declared;  // forward: the statement being derived
  NodeId target;                           // backward: the node being justified
  bool worked = false;                     // performed by the tutor in a worked example
  bool hint_directed = false;              // justification of a hinted GPP node
};

struct StepAttempt {
  Timestamp timestamp = 0;
  StepRequest request;
  Outcome outcome = Outcome::kIncorrectRule;
  NodeId node;             // node created or justified by a correct step
  bool duplicate = false;  // derived statement was already justified on the canvas

  bool correct() const { return outcome == Outcome::kCorrect; }
};

/// Mutable per-problem proof canvas: nodes, justification edges and the
/// append-only step history. One writer at a time.
class ProofState {
 public:
  /// Problem-solving canvas: givens "1".."n" and the unjustified conclusion "C".
  static ProofState ForProblem(const Problem& problem, Timestamp start);

  /// Canvas with tutor-provided nodes (GPP, worked example).
  static ProofState WithNodes(std::string problem_id, logic::Formula conclusion, std::vector<ProofNode> nodes,
                              Timestamp start);

  const std::string& problem_id() const { return problem_id_; }
  const logic::Formula& conclusion() const { return conclusion_; }
  std::span<const ProofNode> nodes() const { return nodes_; }
  const ProofNode* Find(const NodeId& id) const;
  std::span<const StepAttempt> history() const { return history_; }
  Timestamp start_time() const { return start_; }
  std::optional<Timestamp> completion_time() const { return completed_; }

  /// Forward derivation from 1-2 justified (or given) parents. A correct step
  /// justifies an existing unjustified node with the same statement when that
  /// creates no cycle, otherwise appends a new derived node.
  /// Throws ProofError / logic::ArityError / logic::UnknownRuleError without
  /// touching the state.
  StepAttempt DeriveForward(const logic::RuleCatalog& catalog, const StepRequest& request, Timestamp t);

  /// Backward justification of an unjustified node. Hypothesized parents are
  /// created (unjustified) only when the step is correct.
  StepAttempt HypothesizeBackward(const logic::RuleCatalog& catalog, const StepRequest& request, Timestamp t);

  /// Dispatches on request.direction.
  StepAttempt Submit(const logic::RuleCatalog& catalog, const StepRequest& request, Timestamp t);

  /// A node carrying the conclusion is grounded: reachable from the givens
  /// through justified edges only. Unjustified nodes off that path do not
  /// matter.
  bool IsComplete() const;

  /// Ancestors-first check used by the cycle guard: true when `descendant`
  /// is reachable from `ancestor` along justification edges.
  bool Reaches(const NodeId& ancestor, const NodeId& descendant) const;

 private:
  ProofState(std::string problem_id, logic::Formula conclusion, Timestamp start);

  std::size_t IndexOf(const NodeId& id) const;
  NodeId FreshId();
  void Append(ProofNode node);
  void Record(StepAttempt attempt);
  std::vector<logic::Formula> Statements(const std::vector<NodeId>& ids) const;

  std::string problem_id_;
  logic::Formula conclusion_;
  std::vector<ProofNode> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::vector<StepAttempt> history_;
  Timestamp start_;
  std::optional<Timestamp> completed_;
  int next_label_ = 1;
};

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t index, const std::string& what)
      : std::runtime_error("attempt " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Re-applies a logged attempt sequence to `initial`. Recomputed outcomes and
/// node ids must match the log; a mismatch throws ReplayError with the index.
ProofState ReplayLog(ProofState initial, std::span<const StepAttempt> attempts, const logic::RuleCatalog& catalog);

/// Replay on a fresh problem-solving canvas started at `start`.
ProofState ReplayLog(const Problem& problem, std::span<const StepAttempt> attempts,
                     const logic::RuleCatalog& catalog, Timestamp start = 0);

std::string_view ToString(Direction d);
std::string_view ToString(Outcome o);
Direction DirectionFromString(std::string_view s);
Outcome OutcomeFromString(std::string_view s);

}  // namespace gpptutor::proof
