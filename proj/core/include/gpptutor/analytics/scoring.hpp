#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/proof/problem.hpp"

namespace gpptutor::analytics {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalization anchors for one problem.
struct Baseline {
  int expert_steps = 1;
  double reference_ms = 0.0;  // elapsed at or below this earns the full time factor
  double cap_ms = 1.0;        // elapsed at or above this earns none
};

class Baselines {
 public:
  void Set(const std::string& problem_id, Baseline b);
  const Baseline* Find(const std::string& problem_id) const;
  const Baseline& At(const std::string& problem_id) const;
  const std::map<std::string, Baseline>& entries() const { return entries_; }

  /// {"version": 1, "problems": {"<id>": {"expert_steps", "reference_ms", "cap_ms"}}}
  nlohmann::json ToJson() const;
  static Baselines FromJson(const nlohmann::json& j);

 private:
  std::map<std::string, Baseline> entries_;
};

/// Anchors used before any corpus exists: 15 s per expert step as the
/// reference, four times that as the cap.
Baseline DefaultBaseline(const proof::Problem& problem);

/// Expert step count from the problem, reference = median and cap = 95th
/// percentile of the completed non-WE elapsed times in `records`.
Baselines DeriveBaselines(std::span<const proof::Problem> problems, std::span<const AttemptRecord> records);

struct ProblemScore {
  double value = 0.0;  // 0..100, one decimal
  double time_factor = 0.0;
  double step_factor = 0.0;
  double accuracy_factor = 0.0;
  Baseline baseline;
};

/// Round half up to one decimal place.
double RoundScore(double value);

/// value = 100 * mean(time, step, accuracy), rounded. Steps and accuracy
/// count every attempt the student made; tutor-performed steps are excluded.
/// Throws MetricsError when the student made no attempt.
ProblemScore ScoreAttempts(std::span<const proof::StepAttempt> attempts, proof::Timestamp elapsed,
                           const Baseline& baseline);

/// Worked examples are not scored. Throws MetricsError for an incomplete
/// record or a record without attempts.
std::optional<ProblemScore> ScoreProblem(const AttemptRecord& record, const Baselines& baselines);

struct CountMetrics {
  int attempts = 0;
  int correct = 0;
  int incorrect = 0;
  int backward = 0;  // independent backward attempts (hint-directed ones excluded)
  proof::Timestamp elapsed = 0;
};

CountMetrics Count(const AttemptRecord& record);
CountMetrics Count(std::span<const AttemptRecord> records);

/// Correct rule applications over all student attempts, pooled across
/// records. Throws MetricsError when there are none.
double RuleAccuracy(std::span<const AttemptRecord> records);

nlohmann::json ToJson(const ProblemScore& score);

}  // namespace gpptutor::analytics
