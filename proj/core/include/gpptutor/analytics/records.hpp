#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/proof/proof_state.hpp"

namespace gpptutor::analytics {

enum class Condition { kUnassigned, kControl, kGpp };

enum class Phase { kPretest, kTraining, kLevelEnd, kPosttest };

enum class Mode { kWorkedExample, kProblemSolving, kGuidedParsons };

/// One student's work on one curriculum slot.
struct AttemptRecord {
  std::string student;
  Condition condition = Condition::kUnassigned;  // the session's condition once assigned
  Phase phase = Phase::kPretest;
  Mode mode = Mode::kProblemSolving;
  std::string problem_id;
  int level = 1;
  int slot = 0;  // 0-based position in the curriculum
  proof::Timestamp start = 0;
  std::optional<proof::Timestamp> end;
  std::vector<proof::StepAttempt> attempts;
  int hints_served = 0;
  std::optional<double> logged_score;

  bool complete() const { return end.has_value(); }
  proof::Timestamp elapsed() const { return end ? *end - start : 0; }
};

struct ExplanationRecord {
  std::string student;
  std::string problem_id;
  std::string prompt;
  std::string response;
  proof::Timestamp timestamp = 0;
  bool synthetic = false;
};

/// Everything recovered from one session event log.
struct SessionLog {
  std::string student;
  std::uint64_t seed = 0;
  Condition condition = Condition::kUnassigned;
  std::vector<AttemptRecord> records;  // curriculum order
  std::vector<ExplanationRecord> explanations;
};

/// Parses one session event log (JSON Lines, see docs/api.md). Trailing
/// events for an unfinished problem produce an incomplete record.
SessionLog ParseSessionLog(const std::vector<nlohmann::json>& events);
SessionLog LoadSessionLog(const std::filesystem::path& path);

/// Every `*.jsonl` file directly in `dir` (or in `dir/sessions`), sorted by
/// student id.
std::vector<SessionLog> LoadLogDirectory(const std::filesystem::path& dir);

std::string_view ToString(Condition c);
std::string_view ToString(Phase p);
std::string_view ToString(Mode m);
Condition ConditionFromString(std::string_view s);
Phase PhaseFromString(std::string_view s);
Mode ModeFromString(std::string_view s);

}  // namespace gpptutor::analytics
