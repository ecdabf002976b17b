#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/scoring.hpp"
#include "gpptutor/service/curriculum.hpp"
#include "gpptutor/sim/profile.hpp"
#include "gpptutor/sim/student.hpp"

namespace gpptutor::sim {

struct CohortGroup {
  std::string prefix;  // student ids are prefix + two-digit index
  analytics::Condition condition = analytics::Condition::kControl;
  int count = 0;
  StudentProfile profile;
};

/// {"version": 1, "alternative_probability": 0.5, "start": ms,
///  "groups": [{"prefix", "condition", "count", "profile"}]}
struct CohortSpec {
  std::vector<CohortGroup> groups;
  double alternative_probability = 0.5;
  proof::Timestamp start = 1'700'000'000'000;

  nlohmann::json ToJson() const;
  static CohortSpec FromJson(const nlohmann::json& j);
};

struct CohortResult {
  std::vector<std::string> students;
  std::map<std::string, GroundTruth> truth;
  analytics::Baselines baselines;
};

/// Runs every student of `spec` through an embedded tutor whose data
/// directory is `out_dir`, then writes out_dir/ground_truth.json and
/// out_dir/baselines.json. Students run one after another on simulated
/// clocks, so identical inputs produce byte-identical output. Throws
/// SimulationError when out_dir already holds session logs.
CohortResult RunCohort(std::shared_ptr<const service::Curriculum> curriculum, const CohortSpec& spec,
                       std::uint64_t seed, const std::filesystem::path& out_dir,
                       const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

}  // namespace gpptutor::sim
