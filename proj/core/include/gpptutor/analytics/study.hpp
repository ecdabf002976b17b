#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/scoring.hpp"
#include "gpptutor/analytics/statistics.hpp"

namespace gpptutor::analytics {

/// One student's metrics over one phase.
struct StudySummary {
  std::string student;
  Condition condition = Condition::kUnassigned;
  Phase phase = Phase::kPretest;
  int problems = 0;                     // completed problems
  std::optional<double> mean_score;     // over scored (non-WE) problems
  std::optional<double> rule_accuracy;  // pooled; absent without attempts
  int incorrect_steps = 0;
  int backward_attempts = 0;
  double total_hours = 0.0;
};

struct StudentSummary {
  std::string student;
  Condition condition = Condition::kUnassigned;
  std::array<StudySummary, 4> phases;  // indexed by Phase
  std::optional<double> nlg;
  std::optional<Proficiency> proficiency;
  int explanations = 0;

  const StudySummary& phase(Phase p) const { return phases[static_cast<std::size_t>(p)]; }
};

struct GroupStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
};

/// Control against GPP on one metric within one student group.
struct Comparison {
  std::string metric;  // e.g. "training.rule_accuracy", "nlg"
  std::string group;   // "all", "High" or "Low"
  GroupStats control;
  GroupStats gpp;
  std::optional<MannWhitneyResult> test;  // absent when a side is empty
  int m = 1;                              // tests sharing the significance budget
  bool significant = false;
};

struct PhaseTotals {
  Condition condition = Condition::kUnassigned;
  Phase phase = Phase::kPretest;
  std::size_t students = 0;
  double pooled_hours = 0.0;
  double mean_hours = 0.0;
};

struct StudyReport {
  std::vector<StudentSummary> students;
  std::vector<Comparison> comparisons;
  std::vector<PhaseTotals> totals;
  std::vector<std::string> notes;
};

struct StudyOptions {
  double alpha = 0.05;
};

/// Rescores every completed record against `baselines` and builds the
/// per-student summaries, Control vs GPP comparisons (overall, and within
/// the High and Low pretest groups with Bonferroni over the two groups) and
/// per-phase time totals.
StudyReport AnalyzeStudy(std::span<const SessionLog> logs, const Baselines& baselines,
                         const StudyOptions& options = {});

StudySummary Summarize(const std::string& student, Condition condition, Phase phase,
                       std::span<const AttemptRecord> records, const Baselines& baselines);

nlohmann::json ToJson(const StudyReport& report);

/// Fixed-width tables: scores and gain, training metrics, proficiency groups.
std::string FormatTables(const StudyReport& report);

/// One row per student and phase.
std::string ToCsv(const StudyReport& report);

}  // namespace gpptutor::analytics
