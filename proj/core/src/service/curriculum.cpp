#include "gpptutor/service/curriculum.hpp"

#include "gpptutor/proof/serialization.hpp"

namespace gpptutor::service {

using analytics::Phase;

Phase Curriculum::PhaseOf(int index) {
  if (index < 0 || index >= kTotalProblems) throw CurriculumError("slot " + std::to_string(index) + " out of range");
  if (index < kPretestProblems) return Phase::kPretest;
  const int training = index - kPretestProblems;
  if (training < kTrainingLevels * kProblemsPerLevel) {
    return training % kProblemsPerLevel == kProblemsPerLevel - 1 ? Phase::kLevelEnd : Phase::kTraining;
  }
  return Phase::kPosttest;
}

int Curriculum::LevelOf(int index) {
  if (index < kPretestProblems) return 1;
  const int training = index - kPretestProblems;
  if (training < kTrainingLevels * kProblemsPerLevel) return 2 + training / kProblemsPerLevel;
  return 7;
}

Curriculum::Curriculum(std::vector<proof::Problem> problems, std::vector<std::optional<gpp::ChunkModel>> chunks,
                       const logic::RuleCatalog& catalog, const gpp::GppConfig& gpp_config) {
  if (static_cast<int>(problems.size()) != kTotalProblems) {
    throw CurriculumError("curriculum needs " + std::to_string(kTotalProblems) + " problems, got " +
                          std::to_string(problems.size()));
  }
  chunks.resize(problems.size());
  for (int i = 0; i < kTotalProblems; ++i) {
    proof::Problem& p = problems[static_cast<std::size_t>(i)];
    if (p.level != LevelOf(i)) {
      throw CurriculumError("problem " + p.id + " at slot " + std::to_string(i) + " must be level " +
                            std::to_string(LevelOf(i)));
    }
    if (!p.solution) throw CurriculumError("problem " + p.id + " has no expert solution");
    try {
      p.Validate(catalog);
    } catch (const std::exception& e) {
      throw CurriculumError(e.what());
    }
    CurriculumSlot slot{i, PhaseOf(i), std::move(p), std::move(chunks[static_cast<std::size_t>(i)]), std::nullopt};
    if (!slot.is_test()) {
      if (!slot.chunks) {
        const proof::SolutionGraph& expert = *slot.problem.solution;
        slot.chunks = gpp::MineSubgoals(slot.problem.id, std::span(&expert, 1));
      }
      try {
        slot.gpp = gpp::BuildGpp(slot.problem, *slot.chunks, catalog, gpp_config);
      } catch (const std::exception& e) {
        throw CurriculumError("problem " + slot.problem.id + ": " + e.what());
      }
    }
    slots_.push_back(std::move(slot));
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (slots_[i].problem.id == slots_[k].problem.id) {
        throw CurriculumError("duplicate problem id " + slots_[i].problem.id);
      }
    }
  }
}

const CurriculumSlot& Curriculum::slot(int index) const {
  if (index < 0 || index >= size()) throw CurriculumError("slot " + std::to_string(index) + " out of range");
  return slots_[static_cast<std::size_t>(index)];
}

nlohmann::json Curriculum::ToJson() const {
  nlohmann::json problems = nlohmann::json::array();
  for (const auto& s : slots_) {
    nlohmann::json p = proof::ToJson(s.problem);
    p["phase"] = analytics::ToString(s.phase);
    if (s.chunks) p["chunks"] = gpp::ToJson(*s.chunks);
    problems.push_back(std::move(p));
  }
  return {{"version", 1}, {"problems", std::move(problems)}};
}

Curriculum Curriculum::FromJson(const nlohmann::json& j, const logic::RuleCatalog& catalog,
                                const gpp::GppConfig& gpp_config) {
  std::vector<proof::Problem> problems;
  std::vector<std::optional<gpp::ChunkModel>> chunks;
  for (const auto& p : j.at("problems")) {
    problems.push_back(proof::ProblemFromJson(p));
    if (p.contains("chunks") && !p.at("chunks").is_null()) {
      chunks.emplace_back(gpp::ChunkModelFromJson(p.at("chunks")));
    } else {
      chunks.emplace_back(std::nullopt);
    }
  }
  return Curriculum(std::move(problems), std::move(chunks), catalog, gpp_config);
}

}  // namespace gpptutor::service
