#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/proof/problem.hpp"

namespace gpptutor::service {

class CurriculumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurriculumSlot {
  int index = 0;  // 0-based position
  analytics::Phase phase = analytics::Phase::kPretest;
  proof::Problem problem;
  std::optional<gpp::ChunkModel> chunks;
  std::optional<gpp::GppProblem> gpp;  // built for training slots

  int level() const { return problem.level; }
  /// Pretest, level-end and posttest problems: always PS, never any help.
  bool is_test() const { return phase != analytics::Phase::kTraining; }
};

/// Fixed sequence: 2 pretest problems (level 1), levels 2-6 with 4 problems
/// each whose 4th is the level-end test, and 6 posttest problems (level 7).
class Curriculum {
 public:
  static constexpr int kPretestProblems = 2;
  static constexpr int kTrainingLevels = 5;
  static constexpr int kProblemsPerLevel = 4;
  static constexpr int kPosttestProblems = 6;
  static constexpr int kTotalProblems = kPretestProblems + kTrainingLevels * kProblemsPerLevel + kPosttestProblems;

  /// Problems in curriculum order, each with an expert solution. Training
  /// problems without a chunk model get one mined from their own expert
  /// solution. Throws CurriculumError when counts, levels or solutions are
  /// off.
  Curriculum(std::vector<proof::Problem> problems, std::vector<std::optional<gpp::ChunkModel>> chunks,
             const logic::RuleCatalog& catalog, const gpp::GppConfig& gpp_config = {});

  const std::vector<CurriculumSlot>& slots() const { return slots_; }
  const CurriculumSlot& slot(int index) const;
  int size() const { return static_cast<int>(slots_.size()); }

  /// Phase of the i-th slot implied by the fixed layout.
  static analytics::Phase PhaseOf(int index);
  static int LevelOf(int index);

  /// {"version": 1, "problems": [{problem..., "chunks"?: chunk model}]}
  nlohmann::json ToJson() const;
  static Curriculum FromJson(const nlohmann::json& j, const logic::RuleCatalog& catalog,
                             const gpp::GppConfig& gpp_config = {});

 private:
  std::vector<CurriculumSlot> slots_;
};

}  // namespace gpptutor::service
