// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpp_check.hpp"
#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/scoring.hpp"
#include "gpptutor/analytics/statistics.hpp"
#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/logic/parser.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/service/curriculum.hpp"
#include "gpptutor/service/tutor_service.hpp"
#include "gpptutor/sim/cohort.hpp"
#include "gpptutor/sim/corpus.hpp"
#include "gpptutor/sim/problem_generator.hpp"
#include "oracles.hpp"
#include "rule_instances.hpp"
#include "test_util.hpp"

namespace {

namespace an = gpptutor::analytics;
namespace sim = gpptutor::sim;
using gpptutor::logic::Formula;
using gpptutor::logic::RuleCatalog;
using Clock = std::chrono::steady_clock;

const RuleCatalog& Catalog() { return RuleCatalog::Standard(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Verdict RuleSoundness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  int violations = 0;
  int checked = 0;
  std::string first;
  const auto fail = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (const auto& rule : Catalog().rules()) {
    for (int i = 0; i < 1000; ++i) {
      const auto inst = oracle::RandomInstance(rule.id, rng);
      ++checked;
      if (!gpptutor::logic::CheckJustification(inst.conclusion, rule, inst.premises)) fail(rule.id + " rejects its own pattern");
      if (!oracle::Entails(inst.premises, inst.conclusion)) fail(rule.id + " pattern is not entailed");
      if (rule.kind == gpptutor::logic::RuleKind::kEquivalence &&
          !oracle::Entails(std::span<const Formula>(&inst.conclusion, 1), inst.premises.front())) {
        fail(rule.id + " replacement is not an equivalence");
      }
      if (!rule.target_dependent) {
        for (const auto& c : gpptutor::logic::ApplyForward(rule, inst.premises).conclusions) {
          if (!oracle::Entails(inst.premises, c)) fail(rule.id + " derives a non-consequence");
        }
      }
      const Formula decoy = oracle::RandomFormula(rng, 3, 4);
      if (gpptutor::logic::CheckJustification(decoy, rule, inst.premises) && !oracle::Entails(inst.premises, decoy)) {
        fail(rule.id + " accepts a non-consequence");
      }
    }
  }
  const double secs = Seconds(start);
  Verdict v{violations == 0 && secs < 30.0,
            std::to_string(checked) + " applications over " + std::to_string(Catalog().rules().size()) + " rules, " +
                std::to_string(violations) + " violations, " + Fixed(secs) + " s"};
  if (!first.empty()) v.detail += " (first: " + first + ")";
  return v;
}

Verdict ParserRoundTrip() {
  std::mt19937_64 rng(77);
  int failures = 0;
  int max_depth = 0;
  for (int i = 0; i < 1000; ++i) {
    const Formula f = oracle::RandomFormula(rng, 6, 8);
    max_depth = std::max(max_depth, static_cast<int>(f.depth()));
    if (!(gpptutor::logic::ParseFormula(gpptutor::logic::FormatFormula(f)) == f)) ++failures;
  }
  return {failures == 0 && max_depth <= 6,
          "1000 formulas (max depth " + std::to_string(max_depth) + "), " + std::to_string(failures) +
              " mismatches"};
}

Verdict GppReconstruction() {
  int total = 0;
  int exact = 0;
  std::string first;
  const auto check = [&](const gpptutor::gpp::GppProblem& gpp) {
    ++total;
    const std::string diff = testutil::CompareWithOriginal(testutil::ApplyExpertJustifications(gpp, Catalog()), gpp);
    if (diff.empty()) {
      ++exact;
    } else if (first.empty()) {
      first = gpp.problem.id + ": " + diff;
    }
  };

  const auto walkthrough = sim::WalkthroughProblem();
  const auto chunks = gpptutor::gpp::MineSubgoals(walkthrough.id, sim::WalkthroughCorpus(1));
  const auto wgpp = gpptutor::gpp::BuildGpp(walkthrough, chunks, Catalog());
  const bool walkthrough_three = wgpp.unjustified.size() == 3;
  check(wgpp);

  for (std::uint64_t seed : {11u, 12u}) {
    const auto curriculum = sim::GenerateCurriculum(seed);
    for (std::size_t i = 0; i < curriculum.problems.size(); ++i) {
      if (!curriculum.chunks[i] || curriculum.problems[i].id == "L2-1") continue;
      check(gpptutor::gpp::BuildGpp(curriculum.problems[i], *curriculum.chunks[i], Catalog()));
    }
  }
  Verdict v{total >= 20 && exact == total && walkthrough_three,
            std::to_string(exact) + "/" + std::to_string(total) + " expert solutions rebuilt exactly; walkthrough has " +
                std::to_string(wgpp.unjustified.size()) + " unjustified nodes"};
  if (!first.empty()) v.detail += " (first: " + first + ")";
  return v;
}

Verdict MinerRecovery() {
  auto corpus = sim::WalkthroughCorpus(31);
  const std::set<Formula> planted = {testutil::F("G ^ ~H"), testutil::F("J")};
  std::mt19937_64 rng(5);
  std::set<std::string> outputs;
  bool ok = corpus.size() == 50;
  std::size_t chunk_count = 0;
  for (int round = 0; round < 5; ++round) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    const auto model = gpptutor::gpp::MineSubgoals("walkthrough", corpus);
    outputs.insert(gpptutor::gpp::ToJson(model).dump());
    chunk_count = model.chunks.size();
    std::set<Formula> subgoals;
    for (const auto& c : model.chunks) {
      subgoals.insert(c.subgoal);
      // The subgoal is a sink: no other chunk member is derived from it.
      for (const auto& solution : corpus) {
        for (const auto& n : solution.nodes) {
          if (!n.justification || n.statement == c.subgoal) continue;
          if (std::find(c.members.begin(), c.members.end(), n.statement) == c.members.end()) continue;
          for (const auto& p : n.justification->parents) {
            if (solution.Find(p)->statement == c.subgoal) ok = false;
          }
        }
      }
    }
    ok = ok && model.chunks.size() == 2 && subgoals == planted;
  }
  return {ok && outputs.size() == 1,
          std::to_string(corpus.size()) + " solutions, " + std::to_string(chunk_count) + " chunks, " +
              std::to_string(outputs.size()) + " distinct outputs over 5 orderings"};
}

Verdict NlgValues() {
  const double a = an::Nlg(64, 64);
  const double b = an::Nlg(64, 73);
  const double c = an::Nlg(64, 61);
  const bool ok = std::abs(a - 0.0) <= 1e-12 && std::abs(b - 1.0) <= 1e-12 && std::abs(c + 0.5) <= 1e-12;
  return {ok, "nlg(64,64)=" + Fixed(a, 12) + " nlg(64,73)=" + Fixed(b, 12) + " nlg(64,61)=" + Fixed(c, 12)};
}

Verdict MannWhitney() {
  const auto fixture = gpptutor::proof::ReadJsonFile(testutil::Fixture("mann_whitney_cases.json"));
  int cases = 0;
  int mismatches = 0;
  double worst_p = 0.0;
  for (const auto& c : fixture.at("cases")) {
    const auto a = c.at("a").get<std::vector<double>>();
    const auto b = c.at("b").get<std::vector<double>>();
    const auto r = an::MannWhitneyU(a, b);
    const auto pairs = oracle::CountPairs(a, b);
    ++cases;
    if (a.size() > 8 || b.size() > 8 || r.u_a != pairs.u_a || r.u_b != pairs.u_b ||
        r.u_a != c.at("u_a").get<double>()) {
      ++mismatches;
    }
    worst_p = std::max(worst_p, std::abs(r.p - c.at("p").get<double>()));
  }
  std::mt19937_64 rng(8);
  int sum_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(1 + rng() % 15), b(1 + rng() % 15);
    for (auto& x : a) x = static_cast<double>(rng() % 10);
    for (auto& x : b) x = static_cast<double>(rng() % 10);
    const auto r = an::MannWhitneyU(a, b);
    if (r.u_a + r.u_b != static_cast<double>(a.size() * b.size())) ++sum_failures;
  }
  return {cases == 200 && mismatches == 0 && sum_failures == 0 && worst_p < 1e-9,
          std::to_string(cases) + " fixture cases, " + std::to_string(mismatches) + " U mismatches, max |dp| " +
              Scientific(worst_p) + "; U_a+U_b failures " + std::to_string(sum_failures) + "/1000"};
}

std::shared_ptr<const gpptutor::service::Curriculum> MakeCurriculum(std::uint64_t seed) {
  auto generated = sim::GenerateCurriculum(seed);
  return std::make_shared<const gpptutor::service::Curriculum>(std::move(generated.problems),
                                                               std::move(generated.chunks), Catalog());
}

std::vector<an::AttemptRecord> PhaseRecords(const an::SessionLog& log, an::Phase phase) {
  std::vector<an::AttemptRecord> out;
  for (const auto& r : log.records) {
    if (r.phase == phase) out.push_back(r);
  }
  return out;
}

Verdict MetricsPlantback(const std::shared_ptr<const gpptutor::service::Curriculum>& curriculum) {
  testutil::TempDir dir("plantback");
  sim::StudentProfile profile;
  profile.default_error_rate = 0.25;
  profile.backward_preference = 0.4;
  profile.detour_rate = 0.05;
  sim::CohortSpec spec;
  spec.alternative_probability = 0.0;
  spec.groups.push_back({"P", an::Condition::kControl, 8, profile});
  const auto result = sim::RunCohort(curriculum, spec, 4242, dir.path());
  const auto logs = an::LoadLogDirectory(dir.path() / "sessions");

  std::vector<an::AttemptRecord> all;
  int min_attempts = 1 << 30;
  int count_mismatches = 0;
  int planted_backward = 0;
  int planted_incorrect = 0;
  for (const auto& log : logs) {
    const auto& truth = result.truth.at(log.student);
    min_attempts = std::min(min_attempts, an::Count(log.records).attempts);
    for (const auto phase : {an::Phase::kPretest, an::Phase::kTraining, an::Phase::kLevelEnd, an::Phase::kPosttest}) {
      const auto m = an::Count(PhaseRecords(log, phase));
      const auto it = truth.by_phase.find(phase);
      const auto expected = it == truth.by_phase.end() ? sim::GroundTruth::Counts{} : it->second;
      if (m.backward != expected.backward || m.incorrect != expected.incorrect || m.attempts != expected.attempts) {
        ++count_mismatches;
      }
      planted_backward += expected.backward;
      planted_incorrect += expected.incorrect;
    }
    all.insert(all.end(), log.records.begin(), log.records.end());
  }
  const double accuracy = an::RuleAccuracy(all);
  return {logs.size() == 8 && min_attempts >= 200 && std::abs(accuracy - 0.75) <= 0.05 && count_mismatches == 0,
          "pooled accuracy " + Fixed(accuracy, 4) + " (planted 0.75), min attempts/student " +
              std::to_string(min_attempts) + ", " + std::to_string(planted_backward) + " backward and " +
              std::to_string(planted_incorrect) + " incorrect planted, " + std::to_string(count_mismatches) +
              " phase count mismatches"};
}

Verdict EndToEnd(const std::shared_ptr<const gpptutor::service::Curriculum>& curriculum) {
  const auto start = Clock::now();
  testutil::TempDir dir("e2e");
  sim::StudentProfile profile;
  profile.default_error_rate = 0.15;
  profile.error_rate["equivalence"] = 0.25;
  profile.backward_preference = 0.3;
  profile.detour_rate = 0.05;
  profile.hint_rate = 0.3;
  sim::CohortSpec spec;
  spec.groups.push_back({"C", an::Condition::kControl, 10, profile});
  spec.groups.push_back({"G", an::Condition::kGpp, 10, profile});
  gpptutor::service::ServiceConfig config;
  config.data_dir = dir.path();
  config.seed = 99;
  sim::RunCohort(curriculum, spec, config.seed, dir.path());
  const auto sessions = dir.path() / "sessions";
  const auto logs = an::LoadLogDirectory(sessions);

  int incomplete = 0;
  int impure = 0;
  int explanation_faults = 0;
  int test_hints = 0;
  int gpp_completed = 0;
  for (const auto& log : logs) {
    int done = 0;
    for (const auto& r : log.records) done += r.complete() ? 1 : 0;
    if (log.records.size() != 28 || done != 28) ++incomplete;
    for (const auto& r : log.records) {
      if (log.condition == an::Condition::kControl && r.mode == an::Mode::kGuidedParsons) ++impure;
      if (log.condition == an::Condition::kGpp && r.mode == an::Mode::kWorkedExample) ++impure;
      if (log.condition == an::Condition::kControl && r.hints_served > 0) ++impure;
      if (r.phase != an::Phase::kTraining && (r.hints_served > 0 || r.mode != an::Mode::kProblemSolving)) {
        test_hints += std::max(r.hints_served, 1);
      }
      if (r.mode == an::Mode::kGuidedParsons && r.complete()) {
        ++gpp_completed;
        const auto n = std::count_if(log.explanations.begin(), log.explanations.end(),
                                     [&](const an::ExplanationRecord& e) { return e.problem_id == r.problem_id; });
        if (n != 1) ++explanation_faults;
      }
    }
    if (log.condition == an::Condition::kControl && !log.explanations.empty()) ++impure;
  }

  gpptutor::service::ServiceConfig replay_config;
  replay_config.data_dir = dir.path();
  replay_config.seed = config.seed;
  gpptutor::service::TutorService replayed(curriculum, Catalog(), replay_config);
  int replay_diffs = 0;
  for (const auto& id : replayed.SessionIds()) {
    const std::string snapshot = replayed.Snapshot(id).dump(2) + "\n";
    if (snapshot != testutil::ReadText(sessions / (id + ".json"))) ++replay_diffs;
    std::string lines;
    for (const auto& e : replayed.Log(id)) lines += e.dump() + "\n";
    if (lines != testutil::ReadText(sessions / (id + ".jsonl"))) ++replay_diffs;
  }
  const double secs = Seconds(start);
  const bool ok = logs.size() == 20 && incomplete == 0 && impure == 0 && explanation_faults == 0 && test_hints == 0 &&
                  gpp_completed > 0 && replay_diffs == 0 && replayed.SessionIds().size() == 20 && secs < 120.0;
  return {ok, std::to_string(logs.size()) + " students, " + std::to_string(incomplete) + " incomplete, " +
                  std::to_string(impure) + " purity violations, " + std::to_string(gpp_completed) +
                  " GPP problems with " + std::to_string(explanation_faults) + " explanation faults, " +
                  std::to_string(test_hints) + " test-phase hints, " + std::to_string(replay_diffs) +
                  " replay differences, " + Fixed(secs) + " s"};
}

}  // namespace

int main() {
  const std::shared_ptr<const gpptutor::service::Curriculum> curriculum = MakeCurriculum(2024);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"rule soundness", RuleSoundness},
      {"parser round-trip", ParserRoundTrip},
      {"GPP reconstruction", GppReconstruction},
      {"miner recovery", MinerRecovery},
      {"NLG values", NlgValues},
      {"Mann-Whitney U", MannWhitney},
      {"metrics plantback", [&] { return MetricsPlantback(curriculum); }},
      {"end-to-end study", [&] { return EndToEnd(curriculum); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
