#include "gpptutor/gpp/gpp_problem.hpp"

#include <algorithm>
#include <set>

#include "gpptutor/logic/parser.hpp"
#include "gpptutor/proof/serialization.hpp"

namespace gpptutor::gpp {

namespace {

using proof::NodeId;
using proof::NodeOrigin;
using proof::ProofNode;

const NodeId kConclusionId = "C";

NodeRole RoleFromString(std::string_view s) {
  if (s == "given") return NodeRole::kGiven;
  if (s == "conclusion") return NodeRole::kConclusion;
  if (s == "subgoal") return NodeRole::kSubgoal;
  if (s == "member") return NodeRole::kMember;
  throw GppError("unknown node role '" + std::string(s) + "'");
}

bool Contains(const std::vector<NodeId>& ids, const NodeId& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

std::string_view ToString(NodeRole role) {
  switch (role) {
    case NodeRole::kGiven: return "given";
    case NodeRole::kConclusion: return "conclusion";
    case NodeRole::kSubgoal: return "subgoal";
    case NodeRole::kMember: return "member";
  }
  return "?";
}

std::vector<ProofNode> GppProblem::CanvasNodes() const {
  std::vector<ProofNode> nodes = solution.nodes;
  for (auto& n : nodes) {
    if (n.origin == NodeOrigin::kGiven) continue;
    n.origin = NodeOrigin::kProvided;
    if (Contains(unjustified, n.id)) n.justification.reset();
  }
  return nodes;
}

proof::ProofState GppProblem::InitialState(proof::Timestamp start) const {
  return proof::ProofState::WithNodes(problem.id, problem.conclusion, CanvasNodes(), start);
}

const proof::Justification& GppProblem::ExpertJustification(const NodeId& id) const {
  const ProofNode* n = solution.Find(id);
  if (n == nullptr || !n->justification) throw GppError("no expert justification for node '" + id + "'");
  return *n->justification;
}

std::vector<logic::Formula> GppProblem::Subgoals() const {
  std::vector<logic::Formula> out;
  for (const auto& c : chunks) out.push_back(solution.Find(c.subgoal)->statement);
  return out;
}

std::string HintMessage(const logic::Rule& rule, const logic::Formula& statement) {
  return "Apply " + rule.name + " here to " + rule.action + " " + logic::FormatFormula(statement) + ".";
}

std::vector<Hint> HintScript(const proof::SolutionGraph& solution, const std::vector<GppChunk>& chunks,
                             const std::vector<NodeId>& unjustified, const logic::RuleCatalog& catalog) {
  std::vector<NodeId> order;
  if (Contains(unjustified, solution.conclusion)) order.push_back(solution.conclusion);
  for (auto c = chunks.rbegin(); c != chunks.rend(); ++c) {
    for (auto m = c->members.rbegin(); m != c->members.rend(); ++m) {
      if (*m != solution.conclusion && Contains(unjustified, *m)) order.push_back(*m);
    }
  }
  if (order.size() != unjustified.size()) throw GppError("unjustified node outside every chunk");
  std::vector<Hint> hints;
  for (const auto& id : order) {
    const ProofNode* n = solution.Find(id);
    if (n == nullptr || !n->justification) throw GppError("no expert justification for node '" + id + "'");
    const logic::Rule& rule = catalog.At(n->justification->rule);
    hints.push_back({static_cast<int>(hints.size()), id, rule.id, HintMessage(rule, n->statement)});
  }
  return hints;
}

GppProblem BuildGpp(const proof::Problem& problem, const ChunkModel& model, const logic::RuleCatalog& catalog,
                    const GppConfig& config) {
  if (!problem.solution) throw GppError("problem " + problem.id + " has no expert solution");
  if (config.unjustified_per_chunk && *config.unjustified_per_chunk < 0) {
    throw GppError("unjustified_per_chunk must be non-negative");
  }
  ValidateChunks(model);
  const proof::SolutionGraph& expert = *problem.solution;
  const std::vector<NodeId> topo = expert.TopologicalOrder();
  const ProofNode& conclusion = expert.conclusion_node();

  // Expert nodes grouped by chunk, each group in topological order.
  std::vector<std::vector<const ProofNode*>> grouped(model.chunks.size());
  for (const auto& id : topo) {
    if (id == conclusion.id) continue;
    const ProofNode* n = expert.Find(id);
    const Chunk* c = model.ChunkOf(n->statement);
    if (c == nullptr) {
      throw GppError("solution node '" + id + "' (" + logic::FormatFormula(n->statement) + ") is in no chunk");
    }
    grouped[static_cast<std::size_t>(c->index - 1)].push_back(n);
  }

  GppProblem gpp{problem, {}, {}, {}, {}, {}, {}};
  std::map<NodeId, NodeId> relabel;
  std::vector<const ProofNode*> ordered;
  for (const auto& n : expert.nodes) {
    if (n.origin != NodeOrigin::kGiven) continue;
    relabel[n.id] = n.id;
    gpp.roles[n.id] = NodeRole::kGiven;
    ordered.push_back(&n);
  }
  const bool conclusion_only = model.chunks.size() == 1 && model.chunks.front().subgoal == conclusion.statement;
  for (std::size_t ci = 0; ci < model.chunks.size() && !conclusion_only; ++ci) {
    if (grouped[ci].empty()) continue;
    const Chunk& chunk = model.chunks[ci];
    const int index = static_cast<int>(gpp.chunks.size()) + 1;
    GppChunk out{index, {}, {}};
    const ProofNode* subgoal = nullptr;
    int position = 0;
    for (const ProofNode* n : grouped[ci]) {
      if (n->statement == chunk.subgoal) {
        subgoal = n;
        continue;
      }
      const NodeId label = std::to_string(index) + "." + std::to_string(++position);
      relabel[n->id] = label;
      gpp.roles[label] = NodeRole::kMember;
      out.members.push_back(label);
      ordered.push_back(n);
    }
    if (subgoal == nullptr) {
      throw GppError("subgoal " + logic::FormatFormula(chunk.subgoal) + " of chunk " + std::to_string(chunk.index) +
                     " does not occur in the solution");
    }
    out.subgoal = std::to_string(index) + ".C";
    relabel[subgoal->id] = out.subgoal;
    gpp.roles[out.subgoal] = NodeRole::kSubgoal;
    out.members.push_back(out.subgoal);
    ordered.push_back(subgoal);
    gpp.chunks.push_back(std::move(out));
  }
  relabel[conclusion.id] = kConclusionId;
  gpp.roles[kConclusionId] = NodeRole::kConclusion;
  ordered.push_back(&conclusion);
  if (conclusion_only) gpp.chunks.push_back({1, {kConclusionId}, kConclusionId});

  for (const ProofNode* n : ordered) {
    ProofNode copy{relabel.at(n->id), n->statement, n->origin, n->justification};
    if (copy.justification) {
      for (auto& p : copy.justification->parents) p = relabel.at(p);
    }
    gpp.source_ids[copy.id] = n->id;
    gpp.solution.nodes.push_back(std::move(copy));
  }
  gpp.solution.conclusion = kConclusionId;

  std::vector<NodeId> unjustified{kConclusionId};
  for (const auto& c : gpp.chunks) {
    int taken = 0;
    for (const auto& m : c.members) {
      if (m == kConclusionId) continue;
      if (config.unjustified_per_chunk && taken >= *config.unjustified_per_chunk) break;
      unjustified.push_back(m);
      ++taken;
    }
  }
  gpp.hints = HintScript(gpp.solution, gpp.chunks, unjustified, catalog);
  for (const auto& h : gpp.hints) gpp.unjustified.push_back(h.target);
  return gpp;
}

std::string SelfExplanationPrompt(const GppProblem& gpp) {
  std::string joined;
  for (const auto& s : gpp.Subgoals()) {
    if (!joined.empty()) joined += ", ";
    joined += logic::FormatInline(s);
  }
  const char* noun = gpp.chunks.size() == 1 ? "the subgoal " : "the subgoals ";
  return std::string("How did ") + noun + joined + " help you derive the conclusion?";
}

nlohmann::json ToJson(const GppProblem& gpp) {
  std::map<NodeId, int> chunk_of;
  nlohmann::json chunks = nlohmann::json::array();
  for (const auto& c : gpp.chunks) {
    for (const auto& m : c.members) chunk_of[m] = c.index;
    chunks.push_back({{"index", c.index}, {"members", c.members}, {"subgoal", c.subgoal}});
  }
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : gpp.solution.nodes) {
    nlohmann::json j = {{"id", n.id},
                        {"statement", logic::FormatFormula(n.statement)},
                        {"role", ToString(gpp.roles.at(n.id))},
                        {"source", gpp.source_ids.at(n.id)}};
    if (auto it = chunk_of.find(n.id); it != chunk_of.end()) j["chunk"] = it->second;
    if (n.justification) {
      j["rule"] = n.justification->rule;
      j["parents"] = n.justification->parents;
      j["justified"] = !Contains(gpp.unjustified, n.id);
    }
    nodes.push_back(std::move(j));
  }
  nlohmann::json hints = nlohmann::json::array();
  for (const auto& h : gpp.hints) {
    hints.push_back({{"order", h.order}, {"target", h.target}, {"rule", h.rule}, {"message", h.message}});
  }
  return {{"version", 1},
          {"problem", proof::ToJson(gpp.problem)},
          {"nodes", std::move(nodes)},
          {"chunks", std::move(chunks)},
          {"unjustified", gpp.unjustified},
          {"hints", std::move(hints)},
          {"prompt", SelfExplanationPrompt(gpp)}};
}

GppProblem GppProblemFromJson(const nlohmann::json& j) {
  GppProblem gpp{proof::ProblemFromJson(j.at("problem")), {}, {}, {}, {}, {}, {}};
  for (const auto& n : j.at("nodes")) {
    const NodeId id = n.at("id").get<std::string>();
    const NodeRole role = RoleFromString(n.at("role").get<std::string>());
    std::optional<proof::Justification> just;
    if (n.contains("rule")) {
      just = proof::Justification{n.at("rule").get<std::string>(), n.at("parents").get<std::vector<NodeId>>()};
    }
    gpp.solution.nodes.push_back({id, logic::ParseFormula(n.at("statement").get<std::string>()),
                                  role == NodeRole::kGiven ? NodeOrigin::kGiven : NodeOrigin::kDerived,
                                  std::move(just)});
    gpp.roles[id] = role;
    gpp.source_ids[id] = n.value("source", id);
  }
  gpp.solution.conclusion = kConclusionId;
  for (const auto& c : j.at("chunks")) {
    gpp.chunks.push_back({c.at("index").get<int>(), c.at("members").get<std::vector<NodeId>>(),
                          c.at("subgoal").get<std::string>()});
  }
  gpp.unjustified = j.at("unjustified").get<std::vector<NodeId>>();
  for (const auto& h : j.at("hints")) {
    gpp.hints.push_back({h.at("order").get<int>(), h.at("target").get<std::string>(), h.at("rule").get<std::string>(),
                         h.at("message").get<std::string>()});
  }
  return gpp;
}

}  // namespace gpptutor::gpp
