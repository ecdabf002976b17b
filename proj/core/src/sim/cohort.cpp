#include "gpptutor/sim/cohort.hpp"

#include <cstdio>

#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/service/tutor_service.hpp"

namespace gpptutor::sim {

namespace {

constexpr proof::Timestamp kDayMs = 86'400'000;

std::string StudentId(const std::string& prefix, int index) {
  char digits[16];
  std::snprintf(digits, sizeof digits, "%02d", index);
  return prefix + digits;
}

}  // namespace

nlohmann::json CohortSpec::ToJson() const {
  nlohmann::json groups_json = nlohmann::json::array();
  for (const auto& g : groups) {
    groups_json.push_back({{"prefix", g.prefix},
                           {"condition", analytics::ToString(g.condition)},
                           {"count", g.count},
                           {"profile", g.profile.ToJson()}});
  }
  return {{"version", 1}, {"alternative_probability", alternative_probability}, {"start", start},
          {"groups", groups_json}};
}

CohortSpec CohortSpec::FromJson(const nlohmann::json& j) {
  if (j.value("version", 1) != 1) throw SimulationError("unsupported cohort version");
  CohortSpec spec;
  spec.alternative_probability = j.value("alternative_probability", 0.5);
  spec.start = j.value("start", spec.start);
  for (const auto& g : j.at("groups")) {
    CohortGroup group;
    group.prefix = g.at("prefix").get<std::string>();
    group.condition = analytics::ConditionFromString(g.at("condition").get<std::string>());
    group.count = g.at("count").get<int>();
    group.profile = StudentProfile::FromJson(g.value("profile", nlohmann::json::object()));
    if (group.condition == analytics::Condition::kUnassigned) {
      throw SimulationError("cohort group " + group.prefix + " needs a condition");
    }
    if (group.count < 0 || group.count > 99) throw SimulationError("cohort group size must be in 0..99");
    spec.groups.push_back(std::move(group));
  }
  if (!(spec.alternative_probability >= 0.0 && spec.alternative_probability <= 1.0)) {
    throw SimulationError("alternative_probability must be in [0, 1]");
  }
  return spec;
}

CohortResult RunCohort(std::shared_ptr<const service::Curriculum> curriculum, const CohortSpec& spec,
                       std::uint64_t seed, const std::filesystem::path& out_dir, const logic::RuleCatalog& catalog) {
  const std::filesystem::path sessions = out_dir / "sessions";
  if (std::filesystem::exists(sessions) && !std::filesystem::is_empty(sessions)) {
    throw SimulationError(sessions.string() + " already holds session logs");
  }
  service::ServiceConfig config;
  config.data_dir = out_dir;
  config.seed = seed;
  config.alternative_probability = spec.alternative_probability;
  service::TutorService tutor(std::move(curriculum), catalog, config);

  CohortResult result;
  std::uint64_t ordinal = 0;
  for (const auto& group : spec.groups) {
    for (int i = 1; i <= group.count; ++i, ++ordinal) {
      const std::string id = StudentId(group.prefix, i);
      proof::Timestamp clock = spec.start + static_cast<proof::Timestamp>(ordinal) * kDayMs;
      tutor.CreateSession(id, MixSeed(seed, 2 * ordinal + 1), clock);
      SimulatedStudent student(group.profile, MixSeed(seed, 2 * ordinal + 2), catalog);
      GroundTruth& truth = result.truth[id];
      try {
        student.RunSession(tutor, id, group.condition, clock, truth);
      } catch (const std::exception& e) {
        throw SimulationError("session " + id + " stuck: " + e.what());
      }
      result.students.push_back(id);
    }
  }
  result.baselines = tutor.baselines();

  nlohmann::json truth_json = nlohmann::json::object();
  for (const auto& [id, t] : result.truth) truth_json[id] = t.ToJson();
  proof::WriteJsonFile(out_dir / "ground_truth.json", {{"version", 1}, {"seed", seed}, {"students", truth_json}});
  proof::WriteJsonFile(out_dir / "baselines.json", result.baselines.ToJson());
  return result;
}

}  // namespace gpptutor::sim
