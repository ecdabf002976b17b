#include "gpptutor/analytics/records.hpp"

#include <algorithm>
#include <stdexcept>

#include "gpptutor/proof/serialization.hpp"

namespace gpptutor::analytics {

std::string_view ToString(Condition c) {
  switch (c) {
    case Condition::kUnassigned: return "unassigned";
    case Condition::kControl: return "Control";
    case Condition::kGpp: return "GPP";
  }
  return "?";
}

std::string_view ToString(Phase p) {
  switch (p) {
    case Phase::kPretest: return "pretest";
    case Phase::kTraining: return "training";
    case Phase::kLevelEnd: return "level-end";
    case Phase::kPosttest: return "posttest";
  }
  return "?";
}

std::string_view ToString(Mode m) {
  switch (m) {
    case Mode::kWorkedExample: return "WE";
    case Mode::kProblemSolving: return "PS";
    case Mode::kGuidedParsons: return "GPP";
  }
  return "?";
}

Condition ConditionFromString(std::string_view s) {
  if (s == "unassigned") return Condition::kUnassigned;
  if (s == "Control") return Condition::kControl;
  if (s == "GPP") return Condition::kGpp;
  throw std::invalid_argument("unknown condition '" + std::string(s) + "'");
}

Phase PhaseFromString(std::string_view s) {
  if (s == "pretest") return Phase::kPretest;
  if (s == "training") return Phase::kTraining;
  if (s == "level-end") return Phase::kLevelEnd;
  if (s == "posttest") return Phase::kPosttest;
  throw std::invalid_argument("unknown phase '" + std::string(s) + "'");
}

Mode ModeFromString(std::string_view s) {
  if (s == "WE") return Mode::kWorkedExample;
  if (s == "PS") return Mode::kProblemSolving;
  if (s == "GPP") return Mode::kGuidedParsons;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

SessionLog ParseSessionLog(const std::vector<nlohmann::json>& events) {
  SessionLog log;
  auto current = [&](const nlohmann::json& e) -> AttemptRecord& {
    const int slot = e.at("slot").get<int>();
    if (log.records.empty() || log.records.back().slot != slot) {
      throw std::runtime_error("event for slot " + std::to_string(slot) + " before the problem was served");
    }
    return log.records.back();
  };
  for (const auto& e : events) {
    const std::string type = e.at("type").get<std::string>();
    if (type == "session") {
      log.student = e.at("student").get<std::string>();
      log.seed = e.value("seed", std::uint64_t{0});
    } else if (type == "condition") {
      log.condition = ConditionFromString(e.at("condition").get<std::string>());
    } else if (type == "problem") {
      AttemptRecord r;
      r.student = log.student;
      r.phase = PhaseFromString(e.at("phase").get<std::string>());
      r.mode = ModeFromString(e.at("mode").get<std::string>());
      r.problem_id = e.at("problem").get<std::string>();
      r.level = e.at("level").get<int>();
      r.slot = e.at("slot").get<int>();
      r.start = e.at("t").get<proof::Timestamp>();
      log.records.push_back(std::move(r));
    } else if (type == "step") {
      AttemptRecord& r = current(e);
      r.attempts.push_back(proof::StepAttemptFromJson(e.at("attempt")));
      if (e.contains("auto_hint")) ++r.hints_served;
    } else if (type == "hint") {
      ++current(e).hints_served;
    } else if (type == "complete") {
      AttemptRecord& r = current(e);
      r.end = e.at("t").get<proof::Timestamp>();
      if (e.contains("score") && !e.at("score").is_null()) r.logged_score = e.at("score").at("value").get<double>();
    } else if (type == "explanation") {
      const AttemptRecord& r = current(e);
      log.explanations.push_back({log.student, r.problem_id, e.at("prompt").get<std::string>(),
                                  e.at("response").get<std::string>(), e.at("t").get<proof::Timestamp>(),
                                  e.value("synthetic", false)});
    }
  }
  for (auto& r : log.records) r.condition = log.condition;
  return log;
}

SessionLog LoadSessionLog(const std::filesystem::path& path) { return ParseSessionLog(proof::ReadJsonLines(path)); }

std::vector<SessionLog> LoadLogDirectory(const std::filesystem::path& dir) {
  std::filesystem::path root = dir;
  if (std::filesystem::is_directory(dir / "sessions")) root = dir / "sessions";
  if (!std::filesystem::is_directory(root)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SessionLog> logs;
  for (const auto& f : files) logs.push_back(LoadSessionLog(f));
  std::sort(logs.begin(), logs.end(), [](const SessionLog& a, const SessionLog& b) { return a.student < b.student; });
  return logs;
}

}  // namespace gpptutor::analytics
