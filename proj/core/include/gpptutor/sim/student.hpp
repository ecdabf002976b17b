#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/problem.hpp"
#include "gpptutor/service/tutor_service.hpp"
#include "gpptutor/sim/profile.hpp"

namespace gpptutor::sim {

/// What a simulated student actually did, counted on the student's side.
struct GroundTruth {
  struct Counts {
    int attempts = 0;   // submitted proof steps, worked-example advances excluded
    int correct = 0;
    int incorrect = 0;
    int backward = 0;   // backward attempts at targets without a served hint
    int hints = 0;      // hints asked for or shown automatically
    int detours = 0;    // correct off-path derivations
  };

  std::map<analytics::Phase, Counts> by_phase;
  int explanations = 0;

  Counts Total() const;
  nlohmann::json ToJson() const;
};

/// Reproduces a profile's behavior on proof canvases. The student knows the
/// expert route and follows it; errors, detours, direction, hints and think
/// time are drawn from the profile.
class SimulatedStudent {
 public:
  SimulatedStudent(StudentProfile profile, std::uint64_t seed,
                   const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

  /// Solves `problem` on a private canvas along `route` and returns the
  /// student's finished proof. Throws SimulationError when the route needs
  /// more derivations than the step budget allows.
  proof::SolutionGraph SolveLocally(const proof::Problem& problem, const proof::SolutionGraph& route,
                                    proof::Timestamp start = 0);

  /// Works through the whole curriculum in an existing session: assigns
  /// `condition` when the tutor asks for one, solves every problem in the
  /// mode the tutor serves, and answers every self-explanation prompt with
  /// a synthetic response. `clock` advances by the drawn think times.
  void RunSession(service::TutorService& tutor, const std::string& session, analytics::Condition condition,
                  proof::Timestamp& clock, GroundTruth& truth);

  const StudentProfile& profile() const { return profile_; }

 private:
  friend class Solver;

  StudentProfile profile_;
  SimRng rng_;
  const logic::RuleCatalog& catalog_;
};

/// Fixed text used for every simulated self-explanation.
inline constexpr const char* kSyntheticExplanation =
    "[synthetic] Each subgoal split the proof into a part I could finish on its own.";

}  // namespace gpptutor::sim
