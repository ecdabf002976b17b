#pragma once

#include <map>
#include <string>

#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/proof/proof_state.hpp"

namespace testutil {

/// Justifies every unjustified canvas node with the expert justification,
/// in hint order, through the same backward-step path a student uses.
inline gpptutor::proof::ProofState ApplyExpertJustifications(const gpptutor::gpp::GppProblem& gpp,
                                                             const gpptutor::logic::RuleCatalog& catalog) {
  gpptutor::proof::ProofState state = gpp.InitialState(0);
  gpptutor::proof::Timestamp t = 0;
  for (const auto& id : gpp.unjustified) {
    const auto& j = gpp.ExpertJustification(id);
    gpptutor::proof::StepRequest r;
    r.direction = gpptutor::proof::Direction::kBackward;
    r.rule = j.rule;
    r.target = id;
    for (const auto& p : j.parents) r.parents.emplace_back(p);
    const auto attempt = state.HypothesizeBackward(catalog, r, ++t);
    if (!attempt.correct()) return state;
  }
  return state;
}

/// The canvas, mapped back to the original node ids, is the original
/// expert solution: same nodes, same statements, same justifications.
inline std::string CompareWithOriginal(const gpptutor::proof::ProofState& state,
                                       const gpptutor::gpp::GppProblem& gpp) {
  const auto& original = *gpp.problem.solution;
  if (state.nodes().size() != original.nodes.size()) return "node count differs";
  std::map<std::string, std::string> seen;
  for (const auto& n : state.nodes()) {
    const auto src = gpp.source_ids.find(n.id);
    if (src == gpp.source_ids.end()) return "canvas node " + n.id + " has no source";
    if (!seen.emplace(src->second, n.id).second) return "two canvas nodes map to " + src->second;
    const auto* o = original.Find(src->second);
    if (o == nullptr) return "source " + src->second + " missing";
    if (!(o->statement == n.statement)) return "statement differs at " + o->id;
    if (o->justification.has_value() != n.justification.has_value()) return "justification presence differs at " + o->id;
    if (!o->justification) continue;
    if (o->justification->rule != n.justification->rule) return "rule differs at " + o->id;
    if (o->justification->parents.size() != n.justification->parents.size()) return "parent count differs at " + o->id;
    for (std::size_t k = 0; k < o->justification->parents.size(); ++k) {
      if (gpp.source_ids.at(n.justification->parents[k]) != o->justification->parents[k]) {
        return "parent differs at " + o->id;
      }
    }
  }
  if (!state.IsComplete()) return "canvas is not complete";
  return "";
}

}  // namespace testutil
