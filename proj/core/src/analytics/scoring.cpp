#include "gpptutor/analytics/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "gpptutor/analytics/statistics.hpp"

namespace gpptutor::analytics {

namespace {

constexpr double kDefaultMsPerStep = 15000.0;
constexpr double kDefaultCapRatio = 4.0;

void CheckBaseline(const std::string& id, const Baseline& b) {
  if (b.expert_steps < 1) throw MetricsError("baseline " + id + ": expert_steps must be >= 1");
  if (!(b.cap_ms > b.reference_ms)) throw MetricsError("baseline " + id + ": cap must exceed the reference time");
}

}  // namespace

void Baselines::Set(const std::string& problem_id, Baseline b) {
  CheckBaseline(problem_id, b);
  entries_[problem_id] = b;
}

const Baseline* Baselines::Find(const std::string& problem_id) const {
  auto it = entries_.find(problem_id);
  return it == entries_.end() ? nullptr : &it->second;
}

const Baseline& Baselines::At(const std::string& problem_id) const {
  const Baseline* b = Find(problem_id);
  if (b == nullptr) throw MetricsError("no baseline for problem " + problem_id);
  return *b;
}

nlohmann::json Baselines::ToJson() const {
  nlohmann::json problems = nlohmann::json::object();
  for (const auto& [id, b] : entries_) {
    problems[id] = {{"expert_steps", b.expert_steps}, {"reference_ms", b.reference_ms}, {"cap_ms", b.cap_ms}};
  }
  return {{"version", 1}, {"problems", std::move(problems)}};
}

Baselines Baselines::FromJson(const nlohmann::json& j) {
  Baselines out;
  for (const auto& [id, b] : j.at("problems").items()) {
    out.Set(id, {b.at("expert_steps").get<int>(), b.at("reference_ms").get<double>(), b.at("cap_ms").get<double>()});
  }
  return out;
}

Baseline DefaultBaseline(const proof::Problem& problem) {
  const int steps = problem.solution ? static_cast<int>(problem.solution->derived_count()) : 1;
  const double reference = kDefaultMsPerStep * steps;
  return {std::max(steps, 1), reference, reference * kDefaultCapRatio};
}

Baselines DeriveBaselines(std::span<const proof::Problem> problems, std::span<const AttemptRecord> records) {
  Baselines out;
  for (const auto& p : problems) {
    Baseline b = DefaultBaseline(p);
    std::vector<double> times;
    for (const auto& r : records) {
      if (r.problem_id == p.id && r.complete() && r.mode != Mode::kWorkedExample) {
        times.push_back(static_cast<double>(r.elapsed()));
      }
    }
    if (!times.empty()) {
      b.reference_ms = Median(times);
      b.cap_ms = std::max(Percentile(times, 0.95), b.reference_ms + 1000.0);
    }
    out.Set(p.id, b);
  }
  return out;
}

double RoundScore(double value) { return std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0; }

ProblemScore ScoreAttempts(std::span<const proof::StepAttempt> attempts, proof::Timestamp elapsed,
                           const Baseline& baseline) {
  int steps = 0;
  int correct = 0;
  for (const auto& a : attempts) {
    if (a.request.worked) continue;
    ++steps;
    if (a.correct()) ++correct;
  }
  if (steps == 0) throw MetricsError("cannot score a problem without attempts");
  ProblemScore s;
  s.baseline = baseline;
  s.accuracy_factor = static_cast<double>(correct) / steps;
  s.step_factor = std::min(1.0, static_cast<double>(baseline.expert_steps) / steps);
  const auto t = static_cast<double>(elapsed);
  s.time_factor = t <= baseline.reference_ms
                      ? 1.0
                      : std::clamp((baseline.cap_ms - t) / (baseline.cap_ms - baseline.reference_ms), 0.0, 1.0);
  s.value = RoundScore(100.0 * (s.time_factor + s.step_factor + s.accuracy_factor) / 3.0);
  return s;
}

std::optional<ProblemScore> ScoreProblem(const AttemptRecord& record, const Baselines& baselines) {
  if (!record.complete()) throw MetricsError("problem " + record.problem_id + " is not complete");
  if (record.mode == Mode::kWorkedExample) return std::nullopt;
  return ScoreAttempts(record.attempts, record.elapsed(), baselines.At(record.problem_id));
}

CountMetrics Count(const AttemptRecord& record) {
  CountMetrics m;
  for (const auto& a : record.attempts) {
    if (a.request.worked) continue;
    ++m.attempts;
    if (a.correct()) {
      ++m.correct;
    } else {
      ++m.incorrect;
    }
    if (a.request.direction == proof::Direction::kBackward && !a.request.hint_directed) ++m.backward;
  }
  m.elapsed = record.elapsed();
  return m;
}

CountMetrics Count(std::span<const AttemptRecord> records) {
  CountMetrics total;
  for (const auto& r : records) {
    const CountMetrics m = Count(r);
    total.attempts += m.attempts;
    total.correct += m.correct;
    total.incorrect += m.incorrect;
    total.backward += m.backward;
    total.elapsed += m.elapsed;
  }
  return total;
}

double RuleAccuracy(std::span<const AttemptRecord> records) {
  const CountMetrics m = Count(records);
  if (m.attempts == 0) throw MetricsError("rule accuracy needs at least one attempt");
  return static_cast<double>(m.correct) / m.attempts;
}

nlohmann::json ToJson(const ProblemScore& score) {
  return {{"value", score.value},
          {"time", score.time_factor},
          {"step", score.step_factor},
          {"accuracy", score.accuracy_factor},
          {"baseline",
           {{"expert_steps", score.baseline.expert_steps},
            {"reference_ms", score.baseline.reference_ms},
            {"cap_ms", score.baseline.cap_ms}}}};
}

}  // namespace gpptutor::analytics
