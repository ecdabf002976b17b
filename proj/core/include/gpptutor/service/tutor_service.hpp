#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/scoring.hpp"
#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/proof_state.hpp"
#include "gpptutor/service/curriculum.hpp"

namespace gpptutor::service {

class ServiceError : public std::runtime_error {
 public:
  enum class Code {
    kNotFound,             // unknown session
    kDuplicate,            // session id already in use
    kInvalidRequest,       // malformed command
    kModeViolation,        // command not allowed in the current problem mode
    kNoHelp,               // hint requested where the tutor offers none
    kPreconditionFailed,   // lifecycle order violated (gating, incomplete proof, ...)
    kCurriculumExhausted,  // every problem is finished
  };

  ServiceError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

enum class AssignmentPolicy { kAlternating, kForceControl, kForceGpp };

struct ServiceConfig {
  /// Event logs and snapshots live under data_dir/sessions. Empty keeps
  /// everything in memory.
  std::filesystem::path data_dir;
  std::uint64_t seed = 0;
  /// Chance that a training slot serves the condition's alternative mode
  /// (WE for Control, GPP for GPP) instead of PS.
  double alternative_probability = 0.5;
  AssignmentPolicy policy = AssignmentPolicy::kAlternating;
  /// Overrides the per-problem default baselines used for scoring.
  std::optional<analytics::Baselines> baselines;
};

/// Step command: a proof step, or the worked-example advance action.
struct StepCommand {
  bool advance = false;
  proof::StepRequest request;
};

struct StepResult {
  proof::StepAttempt attempt;
  std::optional<gpp::Hint> auto_hint;  // hint served because of this attempt
  bool complete = false;
};

/// Curriculum sequencing, condition assignment and the per-problem
/// lifecycle for many concurrent sessions. Every state change is an event
/// appended to the session's JSON Lines log; constructing the service over
/// an existing data directory replays those logs and checks every recorded
/// result.
class TutorService {
 public:
  TutorService(std::shared_ptr<const Curriculum> curriculum, const logic::RuleCatalog& catalog, ServiceConfig config);
  ~TutorService();

  TutorService(const TutorService&) = delete;
  TutorService& operator=(const TutorService&) = delete;

  /// Seed defaults to one derived from the service seed and the student id.
  nlohmann::json CreateSession(const std::string& student, std::optional<std::uint64_t> seed, proof::Timestamp t);
  analytics::Condition AssignCondition(const std::string& id, std::optional<analytics::Condition> forced,
                                       proof::Timestamp t);
  /// The active problem, serving the next curriculum slot when none is active.
  nlohmann::json CurrentProblem(const std::string& id, proof::Timestamp t);
  StepResult SubmitStep(const std::string& id, const StepCommand& command, proof::Timestamp t);
  gpp::Hint RequestHint(const std::string& id, proof::Timestamp t);
  analytics::ExplanationRecord SubmitExplanation(const std::string& id, const std::string& text, bool synthetic,
                                                 proof::Timestamp t);
  /// Score of the finished problem; nullopt for a worked example.
  std::optional<analytics::ProblemScore> CompleteProblem(const std::string& id, proof::Timestamp t);

  std::vector<nlohmann::json> Log(const std::string& id) const;
  /// Materialized session state; identical for live and replayed sessions.
  nlohmann::json Snapshot(const std::string& id) const;
  std::vector<std::string> SessionIds() const;

  const Curriculum& curriculum() const { return *curriculum_; }
  const analytics::Baselines& baselines() const { return baselines_; }

 private:
  struct Session;

  Session& Get(const std::string& id) const;
  nlohmann::json Execute(Session& s, const nlohmann::json& command, bool replay);
  void Commit(Session& s, nlohmann::json event);
  nlohmann::json SnapshotOf(const Session& s) const;
  void Replay(const std::filesystem::path& log_file);
  std::filesystem::path SessionDir() const;

  std::shared_ptr<const Curriculum> curriculum_;
  const logic::RuleCatalog& catalog_;
  ServiceConfig config_;
  analytics::Baselines baselines_;

  mutable std::mutex mutex_;  // guards sessions_ and arrivals_
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  int arrivals_ = 0;
};

std::string_view ToString(AssignmentPolicy policy);
AssignmentPolicy AssignmentPolicyFromString(std::string_view s);

/// Session id rules: 1-64 characters from [A-Za-z0-9_-].
bool IsValidSessionId(std::string_view id);

}  // namespace gpptutor::service
