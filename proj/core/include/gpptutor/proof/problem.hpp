#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpptutor/logic/formula.hpp"
#include "gpptutor/logic/rules.hpp"

namespace gpptutor::proof {

using NodeId = std::string;

/// Milliseconds on the caller's clock. The engine never reads a clock.
using Timestamp = std::int64_t;

enum class NodeOrigin {
  kGiven,     // premise of the problem
  kDerived,   // created by the student (forward step or backward hypothesis)
  kProvided,  // shown by the tutor (GPP / worked example), possibly unjustified
};

struct Justification {
  std::string rule;
  std::vector<NodeId> parents;

  friend bool operator==(const Justification&, const Justification&) = default;
};

struct ProofNode {
  NodeId id;
  logic::Formula statement;
  NodeOrigin origin = NodeOrigin::kDerived;
  std::optional<Justification> justification;

  bool justified() const { return justification.has_value(); }
};

class ProofError : public std::runtime_error {
 public:
  enum class Code {
    kUnknownNode,
    kUnjustifiedParent,
    kAlreadyJustified,
    kCycle,
    kInvalidRequest,
    kInvalidSolution,
    kInvalidProblem,
  };

  ProofError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// A complete, fully justified proof: givens plus derived nodes, every
/// derived node justified, the conclusion node present, edges acyclic.
struct SolutionGraph {
  std::vector<ProofNode> nodes;
  NodeId conclusion;

  const ProofNode* Find(const NodeId& id) const;
  const ProofNode& conclusion_node() const;

  /// Non-given node ids in a deterministic topological order (ties broken by
  /// position in `nodes`). Throws ProofError on a cycle.
  std::vector<NodeId> TopologicalOrder() const;

  std::size_t derived_count() const;

  /// Throws ProofError(kInvalidSolution) unless every derived node passes
  /// CheckJustification, the graph is acyclic and the conclusion is grounded.
  void Validate(const logic::RuleCatalog& catalog) const;
};

struct Problem {
  std::string id;
  int level = 1;  // 1..7
  std::vector<logic::Formula> premises;
  logic::Formula conclusion;
  std::optional<SolutionGraph> solution;

  /// Premises nonempty, conclusion not among them, level in 1..7; with an
  /// attached solution, the solution validates and the premises entail the
  /// conclusion.
  void Validate(const logic::RuleCatalog& catalog) const;

  /// Id used for the i-th premise (0-based): "1", "2", ...
  static NodeId GivenId(std::size_t index) { return std::to_string(index + 1); }
};

/// Builds a SolutionGraph from a problem's premises and an ordered list of
/// (id, statement, rule, parents) steps. The last step must state the
/// conclusion.
struct SolutionStep {
  NodeId id;
  logic::Formula statement;
  std::string rule;
  std::vector<NodeId> parents;
};

SolutionGraph MakeSolution(std::span<const logic::Formula> premises, std::span<const SolutionStep> steps);

std::string_view ToString(NodeOrigin origin);
NodeOrigin NodeOriginFromString(std::string_view s);

}  // namespace gpptutor::proof
