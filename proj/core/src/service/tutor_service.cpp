#include "gpptutor/service/tutor_service.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "gpptutor/logic/parser.hpp"
#include "gpptutor/proof/serialization.hpp"

namespace gpptutor::service {

namespace {

using analytics::Condition;
using analytics::Mode;
using nlohmann::json;
using Code = ServiceError::Code;

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double Unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

json HintJson(const gpp::Hint& h) {
  return {{"order", h.order}, {"target", h.target}, {"rule", h.rule}, {"message", h.message}};
}

gpp::Hint HintFromJson(const json& j) {
  return {j.at("order").get<int>(), j.at("target").get<std::string>(), j.at("rule").get<std::string>(),
          j.at("message").get<std::string>()};
}

}  // namespace

struct ActiveProblem {
  int slot = 0;
  Mode mode = Mode::kProblemSolving;
  proof::ProofState state;
  int hints_served = 0;
  std::set<proof::NodeId> hinted;
  std::set<proof::NodeId> failed_targets;
  std::vector<proof::NodeId> we_order;
  std::size_t we_cursor = 0;
};

struct TutorService::Session {
  std::mutex mutex;
  std::string id;
  std::uint64_t seed = 0;
  std::mt19937_64 rng;
  Condition condition = Condition::kUnassigned;
  int arrival = 0;
  int slot = 0;  // next slot to serve, or the active one
  std::optional<ActiveProblem> active;
  std::optional<std::string> owed_prompt;
  int owed_slot = -1;
  std::vector<analytics::ExplanationRecord> explanations;
  json results = json::array();
  std::vector<json> events;
};

std::string_view ToString(AssignmentPolicy policy) {
  switch (policy) {
    case AssignmentPolicy::kAlternating: return "alternating";
    case AssignmentPolicy::kForceControl: return "force-control";
    case AssignmentPolicy::kForceGpp: return "force-gpp";
  }
  return "?";
}

AssignmentPolicy AssignmentPolicyFromString(std::string_view s) {
  if (s == "alternating") return AssignmentPolicy::kAlternating;
  if (s == "force-control") return AssignmentPolicy::kForceControl;
  if (s == "force-gpp") return AssignmentPolicy::kForceGpp;
  throw std::invalid_argument("unknown assignment policy '" + std::string(s) + "'");
}

bool IsValidSessionId(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

TutorService::TutorService(std::shared_ptr<const Curriculum> curriculum, const logic::RuleCatalog& catalog,
                           ServiceConfig config)
    : curriculum_(std::move(curriculum)), catalog_(catalog), config_(std::move(config)) {
  if (!curriculum_) throw std::invalid_argument("service needs a curriculum");
  if (config_.alternative_probability < 0.0 || config_.alternative_probability > 1.0) {
    throw std::invalid_argument("alternative_probability must be in [0, 1]");
  }
  for (const auto& slot : curriculum_->slots()) {
    const analytics::Baseline* override =
        config_.baselines ? config_.baselines->Find(slot.problem.id) : nullptr;
    baselines_.Set(slot.problem.id, override ? *override : analytics::DefaultBaseline(slot.problem));
  }
  if (config_.data_dir.empty()) return;
  std::filesystem::create_directories(SessionDir());
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(SessionDir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& f : logs) Replay(f);
}

TutorService::~TutorService() = default;

std::filesystem::path TutorService::SessionDir() const { return config_.data_dir / "sessions"; }

TutorService::Session& TutorService::Get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(Code::kNotFound, "unknown session '" + id + "'");
  return *it->second;
}

std::vector<std::string> TutorService::SessionIds() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  return ids;
}

void TutorService::Commit(Session& s, json event) {
  event["seq"] = s.events.size();
  s.events.push_back(event);
  if (config_.data_dir.empty()) return;
  {
    std::ofstream log(SessionDir() / (s.id + ".jsonl"), std::ios::app);
    log << event.dump() << '\n';
    log.flush();
    if (!log) throw std::runtime_error("cannot append to the log of session " + s.id);
  }
  const std::filesystem::path snapshot = SessionDir() / (s.id + ".json");
  const std::filesystem::path tmp = SessionDir() / (s.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << SnapshotOf(s).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, snapshot);
}

void TutorService::Replay(const std::filesystem::path& log_file) {
  const std::vector<json> events = proof::ReadJsonLines(log_file);
  if (events.empty()) return;
  const json& first = events.front();
  if (first.value("type", std::string()) != "session") {
    throw proof::ReplayError(0, log_file.string() + ": log does not start with a session event");
  }
  auto session = std::make_unique<Session>();
  session->id = first.at("student").get<std::string>();
  Session& s = *session;
  {
    std::lock_guard lock(mutex_);
    if (!sessions_.emplace(s.id, std::move(session)).second) {
      throw proof::ReplayError(0, "session " + s.id + " appears twice");
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    json result;
    try {
      result = Execute(s, events[i], true);
    } catch (const std::exception& e) {
      throw proof::ReplayError(i, "session " + s.id + ": " + e.what());
    }
    for (const auto& [key, value] : result.items()) {
      if (!events[i].contains(key) || events[i].at(key) != value) {
        throw proof::ReplayError(i, "session " + s.id + ": recomputed '" + key + "' differs from the log");
      }
    }
    s.events.push_back(events[i]);
  }
}

json TutorService::Execute(Session& s, const json& command, bool replay) {
  const std::string type = command.at("type").get<std::string>();
  const proof::Timestamp t = command.at("t").get<proof::Timestamp>();

  if (type == "session") {
    s.seed = command.at("seed").get<std::uint64_t>();
    s.rng.seed(s.seed);
    return json::object();
  }

  if (type == "condition") {
    if (s.condition != Condition::kUnassigned) {
      throw ServiceError(Code::kPreconditionFailed, "condition already assigned");
    }
    if (s.slot < Curriculum::kPretestProblems || (s.active && s.active->slot < Curriculum::kPretestProblems)) {
      throw ServiceError(Code::kPreconditionFailed, "condition is assigned after both pretest problems");
    }
    Condition c;
    std::string policy;
    int arrival = 0;
    if (replay) {
      c = analytics::ConditionFromString(command.at("condition").get<std::string>());
      policy = command.at("policy").get<std::string>();
      arrival = command.at("arrival").get<int>();
      std::lock_guard lock(mutex_);
      arrivals_ = std::max(arrivals_, arrival);
    } else {
      {
        std::lock_guard lock(mutex_);
        arrival = ++arrivals_;
      }
      if (command.contains("forced")) {
        c = analytics::ConditionFromString(command.at("forced").get<std::string>());
        policy = "forced";
      } else if (config_.policy == AssignmentPolicy::kForceControl) {
        c = Condition::kControl;
        policy = std::string(ToString(config_.policy));
      } else if (config_.policy == AssignmentPolicy::kForceGpp) {
        c = Condition::kGpp;
        policy = std::string(ToString(config_.policy));
      } else {
        c = arrival % 2 == 1 ? Condition::kControl : Condition::kGpp;
        policy = "alternating";
      }
      if (c == Condition::kUnassigned) throw ServiceError(Code::kInvalidRequest, "cannot assign 'unassigned'");
    }
    s.condition = c;
    s.arrival = arrival;
    return {{"condition", analytics::ToString(c)}, {"policy", policy}, {"arrival", arrival}};
  }

  if (type == "problem") {
    if (s.active) throw ServiceError(Code::kPreconditionFailed, "a problem is already active");
    if (s.owed_prompt) throw ServiceError(Code::kPreconditionFailed, "a self-explanation is owed");
    if (s.slot >= curriculum_->size()) throw ServiceError(Code::kCurriculumExhausted, "curriculum finished");
    if (s.slot >= Curriculum::kPretestProblems && s.condition == Condition::kUnassigned) {
      throw ServiceError(Code::kPreconditionFailed, "condition must be assigned before training");
    }
    const CurriculumSlot& slot = curriculum_->slot(s.slot);
    Mode mode = Mode::kProblemSolving;
    if (!slot.is_test() && Unit(s.rng) < config_.alternative_probability) {
      mode = s.condition == Condition::kControl ? Mode::kWorkedExample : Mode::kGuidedParsons;
    }
    switch (mode) {
      case Mode::kProblemSolving:
        s.active.emplace(ActiveProblem{s.slot, mode, proof::ProofState::ForProblem(slot.problem, t), 0, {}, {}, {}, 0});
        break;
      case Mode::kGuidedParsons:
        s.active.emplace(ActiveProblem{s.slot, mode, slot.gpp->InitialState(t), 0, {}, {}, {}, 0});
        break;
      case Mode::kWorkedExample: {
        std::vector<proof::ProofNode> nodes = slot.gpp->solution.nodes;
        for (auto& n : nodes) {
          if (n.origin == proof::NodeOrigin::kGiven) continue;
          n.origin = proof::NodeOrigin::kProvided;
          n.justification.reset();
        }
        s.active.emplace(ActiveProblem{
            s.slot, mode, proof::ProofState::WithNodes(slot.problem.id, slot.problem.conclusion, nodes, t), 0, {}, {},
            slot.gpp->solution.TopologicalOrder(), 0});
        break;
      }
    }
    return {{"slot", slot.index},
            {"problem", slot.problem.id},
            {"level", slot.level()},
            {"phase", analytics::ToString(slot.phase)},
            {"mode", analytics::ToString(mode)}};
  }

  if (!s.active) {
    if (type == "explanation") {
      if (!s.owed_prompt) throw ServiceError(Code::kPreconditionFailed, "no self-explanation is owed");
      std::string response = command.at("response").get<std::string>();
      if (response.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ServiceError(Code::kInvalidRequest, "explanation text is empty");
      }
      const CurriculumSlot& slot = curriculum_->slot(s.owed_slot);
      s.explanations.push_back({s.id, slot.problem.id, *s.owed_prompt, response, t, command.value("synthetic", false)});
      json result = {{"slot", s.owed_slot}, {"problem", slot.problem.id}, {"prompt", *s.owed_prompt}};
      s.owed_prompt.reset();
      s.owed_slot = -1;
      return result;
    }
    throw ServiceError(Code::kPreconditionFailed, "no active problem");
  }

  ActiveProblem& a = *s.active;
  const CurriculumSlot& slot = curriculum_->slot(a.slot);

  if (type == "step") {
    if (a.state.IsComplete()) throw ServiceError(Code::kPreconditionFailed, "the proof is already complete");
    const bool advance = command.value("action", std::string()) == "advance";
    proof::StepRequest request;
    if (a.mode == Mode::kWorkedExample) {
      if (!advance) throw ServiceError(Code::kModeViolation, "worked examples only accept the advance action");
      while (a.we_cursor < a.we_order.size() && a.state.Find(a.we_order[a.we_cursor])->justified()) ++a.we_cursor;
      if (a.we_cursor >= a.we_order.size()) throw ServiceError(Code::kPreconditionFailed, "nothing left to show");
      const proof::NodeId& target = a.we_order[a.we_cursor];
      const proof::Justification& j = slot.gpp->ExpertJustification(target);
      request.direction = proof::Direction::kBackward;
      request.rule = j.rule;
      request.parents.assign(j.parents.begin(), j.parents.end());
      request.target = target;
      request.worked = true;
    } else {
      if (advance) throw ServiceError(Code::kModeViolation, "the advance action only exists in worked examples");
      if (!command.contains("request")) throw ServiceError(Code::kInvalidRequest, "step needs a request");
      request = proof::StepRequestFromJson(command.at("request"));
      request.worked = false;
      request.hint_directed = a.mode == Mode::kGuidedParsons && request.direction == proof::Direction::kBackward &&
                              a.hinted.contains(request.target);
    }
    const proof::StepAttempt attempt = a.state.Submit(catalog_, request, t);
    json result = {{"slot", a.slot}, {"attempt", proof::ToJson(attempt)}, {"complete", a.state.IsComplete()}};
    if (a.mode == Mode::kWorkedExample) ++a.we_cursor;
    if (a.mode == Mode::kGuidedParsons && !attempt.correct() && request.direction == proof::Direction::kBackward) {
      const auto& hints = slot.gpp->hints;
      const bool first_miss = a.failed_targets.insert(request.target).second;
      if (first_miss && a.hints_served < static_cast<int>(hints.size()) &&
          hints[static_cast<std::size_t>(a.hints_served)].target == request.target) {
        const gpp::Hint& h = hints[static_cast<std::size_t>(a.hints_served++)];
        a.hinted.insert(h.target);
        result["auto_hint"] = HintJson(h);
      }
    }
    return result;
  }

  if (type == "hint") {
    if (a.mode != Mode::kGuidedParsons) {
      throw ServiceError(Code::kNoHelp, "hints are only available in guided Parsons problems");
    }
    const auto& hints = slot.gpp->hints;
    const bool repeat = a.hints_served >= static_cast<int>(hints.size());
    const gpp::Hint& h = repeat ? hints.back() : hints[static_cast<std::size_t>(a.hints_served++)];
    a.hinted.insert(h.target);
    json result = HintJson(h);
    result["slot"] = a.slot;
    result["repeat"] = repeat;
    return result;
  }

  if (type == "complete") {
    if (!a.state.IsComplete()) throw ServiceError(Code::kPreconditionFailed, "the proof is not complete");
    json score = nullptr;
    if (a.mode != Mode::kWorkedExample) {
      score = analytics::ToJson(
          analytics::ScoreAttempts(a.state.history(), t - a.state.start_time(), baselines_.At(slot.problem.id)));
    }
    json result = {{"slot", a.slot}, {"score", score}};
    s.results.push_back({{"slot", a.slot},
                         {"problem", slot.problem.id},
                         {"mode", analytics::ToString(a.mode)},
                         {"score", score},
                         {"attempts", a.state.history().size()},
                         {"hints", a.hints_served}});
    if (a.mode == Mode::kGuidedParsons) {
      s.owed_prompt = gpp::SelfExplanationPrompt(*slot.gpp);
      s.owed_slot = a.slot;
      result["prompt"] = *s.owed_prompt;
    }
    s.active.reset();
    ++s.slot;
    return result;
  }

  if (type == "explanation") throw ServiceError(Code::kPreconditionFailed, "no self-explanation is owed");
  throw ServiceError(Code::kInvalidRequest, "unknown command '" + type + "'");
}

json TutorService::CreateSession(const std::string& student, std::optional<std::uint64_t> seed, proof::Timestamp t) {
  if (!IsValidSessionId(student)) throw ServiceError(Code::kInvalidRequest, "invalid student id '" + student + "'");
  auto session = std::make_unique<Session>();
  session->id = student;
  Session& s = *session;
  {
    std::lock_guard lock(mutex_);
    if (!sessions_.emplace(student, std::move(session)).second) {
      throw ServiceError(Code::kDuplicate, "session '" + student + "' already exists");
    }
  }
  std::lock_guard lock(s.mutex);
  const std::uint64_t effective = seed ? *seed : SplitMix(config_.seed ^ Fnv1a(student));
  json command = {{"type", "session"}, {"version", 1}, {"student", student}, {"seed", effective}, {"t", t}};
  Execute(s, command, false);
  Commit(s, command);
  return SnapshotOf(s);
}

Condition TutorService::AssignCondition(const std::string& id, std::optional<Condition> forced, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  json command = {{"type", "condition"}, {"t", t}};
  if (forced) command["forced"] = analytics::ToString(*forced);
  json result = Execute(s, command, false);
  command.update(result);
  Commit(s, command);
  return s.condition;
}

nlohmann::json TutorService::CurrentProblem(const std::string& id, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  if (!s.active) {
    json command = {{"type", "problem"}, {"t", t}};
    json result = Execute(s, command, false);
    command.update(result);
    Commit(s, command);
  }
  const ActiveProblem& a = *s.active;
  const CurriculumSlot& slot = curriculum_->slot(a.slot);
  const gpp::GppProblem* gpp = a.mode == Mode::kProblemSolving ? nullptr : &*slot.gpp;

  std::map<proof::NodeId, int> chunk_of;
  json chunks = json::array();
  if (gpp != nullptr) {
    for (const auto& c : gpp->chunks) {
      for (const auto& m : c.members) chunk_of[m] = c.index;
      chunks.push_back({{"index", c.index}, {"members", c.members}, {"subgoal", c.subgoal}});
    }
  }
  json nodes = json::array();
  for (const auto& n : a.state.nodes()) {
    std::string role = "derived";
    if (n.origin == proof::NodeOrigin::kGiven) {
      role = "given";
    } else if (gpp != nullptr && gpp->roles.contains(n.id) && n.origin == proof::NodeOrigin::kProvided) {
      role = std::string(gpp::ToString(gpp->roles.at(n.id)));
    } else if (n.origin == proof::NodeOrigin::kProvided && n.statement == slot.problem.conclusion) {
      role = "conclusion";
    }
    json j = {{"id", n.id},
              {"statement", logic::FormatFormula(n.statement)},
              {"origin", proof::ToString(n.origin)},
              {"role", role},
              {"justified", n.origin == proof::NodeOrigin::kGiven || n.justified()}};
    if (n.justification) {
      j["rule"] = n.justification->rule;
      j["parents"] = n.justification->parents;
    }
    if (auto it = chunk_of.find(n.id); it != chunk_of.end()) j["chunk"] = it->second;
    nodes.push_back(std::move(j));
  }
  json premises = json::array();
  for (const auto& p : slot.problem.premises) premises.push_back(logic::FormatFormula(p));
  json view = {{"session", s.id},
               {"slot", a.slot},
               {"problem", slot.problem.id},
               {"level", slot.level()},
               {"phase", analytics::ToString(slot.phase)},
               {"mode", analytics::ToString(a.mode)},
               {"premises", std::move(premises)},
               {"conclusion", logic::FormatFormula(slot.problem.conclusion)},
               {"nodes", std::move(nodes)},
               {"chunks", std::move(chunks)},
               {"attempts", a.state.history().size()},
               {"complete", a.state.IsComplete()},
               {"hints",
                {{"available", a.mode == Mode::kGuidedParsons},
                 {"served", a.hints_served},
                 {"total", gpp != nullptr && a.mode == Mode::kGuidedParsons ? gpp->hints.size() : 0}}}};
  if (a.mode == Mode::kGuidedParsons) view["prompt"] = gpp::SelfExplanationPrompt(*gpp);
  if (a.mode == Mode::kWorkedExample) {
    std::size_t remaining = 0;
    for (const auto& id : a.we_order) {
      if (!a.state.Find(id)->justified()) ++remaining;
    }
    view["remaining"] = remaining;
  }
  return view;
}

StepResult TutorService::SubmitStep(const std::string& id, const StepCommand& command, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  json cmd = {{"type", "step"}, {"t", t}};
  if (command.advance) {
    cmd["action"] = "advance";
  } else {
    cmd["request"] = proof::ToJson(command.request);
  }
  json result = Execute(s, cmd, false);
  cmd.update(result);
  Commit(s, cmd);
  StepResult out{proof::StepAttemptFromJson(result.at("attempt")), std::nullopt, result.at("complete").get<bool>()};
  if (result.contains("auto_hint")) out.auto_hint = HintFromJson(result.at("auto_hint"));
  return out;
}

gpp::Hint TutorService::RequestHint(const std::string& id, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  json cmd = {{"type", "hint"}, {"t", t}};
  json result = Execute(s, cmd, false);
  cmd.update(result);
  Commit(s, cmd);
  return HintFromJson(result);
}

analytics::ExplanationRecord TutorService::SubmitExplanation(const std::string& id, const std::string& text,
                                                             bool synthetic, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  json cmd = {{"type", "explanation"}, {"t", t}, {"response", text}, {"synthetic", synthetic}};
  json result = Execute(s, cmd, false);
  cmd.update(result);
  Commit(s, cmd);
  return s.explanations.back();
}

std::optional<analytics::ProblemScore> TutorService::CompleteProblem(const std::string& id, proof::Timestamp t) {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  json cmd = {{"type", "complete"}, {"t", t}};
  json result = Execute(s, cmd, false);
  cmd.update(result);
  Commit(s, cmd);
  if (result.at("score").is_null()) return std::nullopt;
  const json& j = result.at("score");
  const json& b = j.at("baseline");
  return analytics::ProblemScore{j.at("value").get<double>(),
                                 j.at("time").get<double>(),
                                 j.at("step").get<double>(),
                                 j.at("accuracy").get<double>(),
                                 {b.at("expert_steps").get<int>(), b.at("reference_ms").get<double>(),
                                  b.at("cap_ms").get<double>()}};
}

std::vector<json> TutorService::Log(const std::string& id) const {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  return s.events;
}

json TutorService::Snapshot(const std::string& id) const {
  Session& s = Get(id);
  std::lock_guard lock(s.mutex);
  return SnapshotOf(s);
}

json TutorService::SnapshotOf(const Session& s) const {
  json active = nullptr;
  if (s.active) {
    const ActiveProblem& a = *s.active;
    active = {{"slot", a.slot},
              {"mode", analytics::ToString(a.mode)},
              {"hints_served", a.hints_served},
              {"hinted", a.hinted},
              {"we_cursor", a.we_cursor},
              {"state", proof::ToJson(a.state)}};
  }
  json explanations = json::array();
  for (const auto& e : s.explanations) {
    explanations.push_back({{"problem", e.problem_id},
                            {"prompt", e.prompt},
                            {"response", e.response},
                            {"t", e.timestamp},
                            {"synthetic", e.synthetic}});
  }
  json snap = {{"version", 1},
               {"session", s.id},
               {"seed", s.seed},
               {"condition", analytics::ToString(s.condition)},
               {"arrival", s.arrival},
               {"slot", s.slot},
               {"finished", s.slot >= curriculum_->size() && !s.owed_prompt},
               {"events", s.events.size()},
               {"active", std::move(active)},
               {"results", s.results},
               {"explanations", std::move(explanations)}};
  snap["explanation_owed"] = s.owed_prompt ? json(*s.owed_prompt) : json(nullptr);
  return snap;
}

}  // namespace gpptutor::service
