#pragma once

#include <map>
#include <memory>
#include <string>

#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/service/curriculum.hpp"
#include "gpptutor/service/tutor_service.hpp"
#include "gpptutor/sim/corpus.hpp"

namespace testutil {

inline std::shared_ptr<const gpptutor::service::Curriculum> SharedCurriculum() {
  static const auto curriculum = [] {
    auto generated = gpptutor::sim::GenerateCurriculum(4);
    return std::make_shared<const gpptutor::service::Curriculum>(
        std::move(generated.problems), std::move(generated.chunks), gpptutor::logic::RuleCatalog::Standard());
  }();
  return curriculum;
}

/// Drives the active problem of a session to completion with expert steps
/// and no mistakes, whatever its mode.
inline void SolveActive(gpptutor::service::TutorService& tutor, const std::string& id, gpptutor::proof::Timestamp& t) {
  using gpptutor::proof::Direction;
  const auto view = tutor.CurrentProblem(id, t);
  const auto& slot = tutor.curriculum().slot(view.at("slot").get<int>());
  const std::string mode = view.at("mode");
  gpptutor::service::StepCommand cmd;
  if (mode == "WE") {
    cmd.advance = true;
    for (bool done = false; !done;) done = tutor.SubmitStep(id, cmd, t += 1000).complete;
    return;
  }
  if (mode == "GPP") {
    for (const auto& target : slot.gpp->unjustified) {
      const auto& j = slot.gpp->ExpertJustification(target);
      cmd.request = {};
      cmd.request.direction = Direction::kBackward;
      cmd.request.rule = j.rule;
      cmd.request.target = target;
      cmd.request.parents.assign(j.parents.begin(), j.parents.end());
      tutor.SubmitStep(id, cmd, t += 1000);
    }
    return;
  }
  const auto& solution = *slot.problem.solution;
  std::map<std::string, std::string> canvas;
  for (const auto& n : solution.nodes) {
    if (n.origin == gpptutor::proof::NodeOrigin::kGiven) canvas[n.id] = n.id;
  }
  for (const auto& nid : solution.TopologicalOrder()) {
    const auto* n = solution.Find(nid);
    cmd.request = {};
    cmd.request.direction = Direction::kForward;
    cmd.request.rule = n->justification->rule;
    for (const auto& p : n->justification->parents) cmd.request.parents.emplace_back(canvas.at(p));
    cmd.request.declared = n->statement;
    canvas[nid] = tutor.SubmitStep(id, cmd, t += 1000).attempt.node;
  }
}

/// Completes the active problem and answers an owed self-explanation.
inline void FinishActive(gpptutor::service::TutorService& tutor, const std::string& id, gpptutor::proof::Timestamp& t) {
  tutor.CompleteProblem(id, t += 500);
  if (!tutor.Snapshot(id).at("explanation_owed").is_null()) {
    tutor.SubmitExplanation(id, "The subgoals split the proof.", false, t += 500);
  }
}

}  // namespace testutil
