#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/problem.hpp"
#include "gpptutor/proof/proof_state.hpp"

namespace gpptutor::gpp {

class GppError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GppConfig {
  /// Members per chunk left for the student to justify, earliest first.
  /// nullopt strips every justification.
  std::optional<int> unjustified_per_chunk = 1;
};

/// Display role of a node on the GPP canvas.
enum class NodeRole { kGiven, kConclusion, kSubgoal, kMember };

struct GppChunk {
  int index = 1;
  std::vector<proof::NodeId> members;  // expert topological order; subgoal last
  proof::NodeId subgoal;
};

struct Hint {
  int order = 0;  // 0-based trigger order
  proof::NodeId target;
  std::string rule;  // rule id of the expert justification
  std::string message;
};

struct GppProblem {
  proof::Problem problem;          // premises, conclusion, original expert solution
  proof::SolutionGraph solution;   // expert solution relabeled "1".., "i.k", "i.C", "C"
  std::vector<GppChunk> chunks;
  std::vector<proof::NodeId> unjustified;  // in hint order
  std::vector<Hint> hints;
  std::map<proof::NodeId, NodeRole> roles;
  std::map<proof::NodeId, proof::NodeId> source_ids;  // relabeled id -> id in the original solution

  /// Canvas handed to the student: every node provided, the unjustified set
  /// stripped of its justifications.
  std::vector<proof::ProofNode> CanvasNodes() const;
  proof::ProofState InitialState(proof::Timestamp start) const;
  const proof::Justification& ExpertJustification(const proof::NodeId& id) const;
  std::vector<logic::Formula> Subgoals() const;
};

/// Relabels the expert solution by chunk, strips the conclusion plus the
/// earliest `unjustified_per_chunk` members of each chunk, and builds the
/// hint script. Chunk members that do not occur in the solution are
/// ignored; a solution node outside every chunk throws GppError.
GppProblem BuildGpp(const proof::Problem& problem, const ChunkModel& chunks, const logic::RuleCatalog& catalog,
                    const GppConfig& config = {});

/// Conclusion first, then chunks from last to first, each in reverse
/// topological order. One hint per unjustified node.
std::vector<Hint> HintScript(const proof::SolutionGraph& solution, const std::vector<GppChunk>& chunks,
                             const std::vector<proof::NodeId>& unjustified, const logic::RuleCatalog& catalog);

/// "Apply <rule name> here to <action> <statement>."
std::string HintMessage(const logic::Rule& rule, const logic::Formula& statement);

/// "How did the subgoals <s1>, <s2> help you derive the conclusion?"
std::string SelfExplanationPrompt(const GppProblem& gpp);

nlohmann::json ToJson(const GppProblem& gpp);
GppProblem GppProblemFromJson(const nlohmann::json& j);

std::string_view ToString(NodeRole role);

}  // namespace gpptutor::gpp
