#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/study.hpp"
#include "gpptutor/logic/entailment.hpp"
#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/sim/cohort.hpp"
#include "gpptutor/sim/corpus.hpp"
#include "gpptutor/sim/problem_generator.hpp"
#include "gpptutor/sim/student.hpp"
#include "service_fixture.hpp"
#include "test_util.hpp"

namespace {

namespace an = gpptutor::analytics;
namespace sim = gpptutor::sim;

const gpptutor::logic::RuleCatalog& Catalog() { return gpptutor::logic::RuleCatalog::Standard(); }

TEST(Profile, ValidationAndJson) {
  sim::StudentProfile p;
  p.error_rate["elimination"] = 0.2;
  p.default_error_rate = 0.1;
  p.backward_preference = 0.4;
  EXPECT_NO_THROW(p.Validate());
  EXPECT_DOUBLE_EQ(p.ErrorRate("elimination"), 0.2);
  EXPECT_DOUBLE_EQ(p.ErrorRate("introduction"), 0.1);
  EXPECT_EQ(sim::StudentProfile::FromJson(p.ToJson()).ToJson(), p.ToJson());

  sim::StudentProfile bad = p;
  bad.hint_rate = 1.5;
  EXPECT_THROW(bad.Validate(), sim::SimulationError);
  bad = p;
  bad.default_error_rate = 1.0;
  EXPECT_THROW(bad.Validate(), sim::SimulationError);
  bad = p;
  bad.step_budget = -1;
  EXPECT_THROW(bad.Validate(), sim::SimulationError);
}

TEST(SimRng, DeterministicAndInRange) {
  sim::SimRng a(3), b(3);
  for (int i = 0; i < 100; ++i) {
    const double u = a.Unit();
    EXPECT_EQ(u, b.Unit());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.Below(7), 7u);
    b.Below(7);
    EXPECT_GT(a.LogNormal(8.5, 0.5), 0.0);
    b.LogNormal(8.5, 0.5);
  }
  EXPECT_NE(sim::MixSeed(1, 1), sim::MixSeed(1, 2));
  EXPECT_EQ(sim::MixSeed(5, 9), sim::MixSeed(5, 9));
}

TEST(ProblemGenerator, ProducesValidProblemsOfTheRequestedLength) {
  sim::ProblemGenerator gen(12);
  for (int level = 1; level <= 7; ++level) {
    for (int k = 0; k < 4; ++k) {
      const auto p = gen.Generate("g" + std::to_string(level) + "-" + std::to_string(k), level,
                                  sim::ExpertStepsForLevel(level));
      EXPECT_EQ(p.level, level);
      ASSERT_TRUE(p.solution.has_value());
      EXPECT_EQ(p.solution->derived_count(), static_cast<std::size_t>(sim::ExpertStepsForLevel(level)));
      EXPECT_NO_THROW(p.Validate(Catalog()));
      EXPECT_TRUE(gpptutor::logic::Entails(p.premises, p.conclusion));
    }
  }
  EXPECT_EQ(gpptutor::proof::ToJson(sim::ProblemGenerator(4).Generate("x", 3, 5)),
            gpptutor::proof::ToJson(sim::ProblemGenerator(4).Generate("x", 3, 5)));
}

TEST(Corpus, ErrorFreeStudentsReproduceTheRoute) {
  const auto problem = sim::WalkthroughProblem();
  const auto corpus = sim::GenerateCorpus(problem, 5, sim::StudentProfile{}, 1);
  ASSERT_EQ(corpus.size(), 5u);
  for (const auto& s : corpus) {
    EXPECT_EQ(s.derived_count(), 5u);
    EXPECT_NO_THROW(s.Validate(Catalog()));
    std::set<gpptutor::logic::Formula> got, want;
    for (const auto& n : s.nodes) got.insert(n.statement);
    for (const auto& n : problem.solution->nodes) want.insert(n.statement);
    EXPECT_EQ(got, want);
  }
}

TEST(Corpus, DetoursAreValidAndOffPath) {
  const auto corpus = sim::GenerateCorpus(sim::TwoBranchProblem(), 30, sim::CorpusProfile(), 8);
  std::size_t longer = 0;
  for (const auto& s : corpus) {
    EXPECT_NO_THROW(s.Validate(Catalog()));
    if (s.derived_count() > 5) ++longer;
  }
  EXPECT_GT(longer, 0u);
}

TEST(Corpus, StepBudgetIsEnforced) {
  sim::StudentProfile p;
  p.step_budget = 1;
  EXPECT_THROW(sim::GenerateCorpus(sim::WalkthroughProblem(), 1, p, 1), sim::SimulationError);
}

TEST(Corpus, CurriculumIsDeterministic) {
  const auto a = sim::GenerateCurriculum(6, 8);
  const auto b = sim::GenerateCurriculum(6, 8);
  ASSERT_EQ(a.problems.size(), 28u);
  for (std::size_t i = 0; i < a.problems.size(); ++i) {
    EXPECT_EQ(gpptutor::proof::ToJson(a.problems[i]), gpptutor::proof::ToJson(b.problems[i]));
    EXPECT_EQ(a.chunks[i].has_value(), b.chunks[i].has_value());
  }
}

TEST(Cohort, SpecJsonRoundTrip) {
  sim::CohortSpec spec;
  spec.groups.push_back({"C", an::Condition::kControl, 3, {}});
  spec.groups.push_back({"G", an::Condition::kGpp, 2, sim::CorpusProfile()});
  EXPECT_EQ(sim::CohortSpec::FromJson(spec.ToJson()).ToJson(), spec.ToJson());
  auto bad = spec.ToJson();
  bad["groups"][0]["count"] = 100;
  EXPECT_THROW(sim::CohortSpec::FromJson(bad), sim::SimulationError);
  bad = spec.ToJson();
  bad["groups"][0]["condition"] = "unassigned";
  EXPECT_THROW(sim::CohortSpec::FromJson(bad), sim::SimulationError);
}

TEST(Cohort, RunIsDeterministicAndMatchesGroundTruth) {
  sim::CohortSpec spec;
  sim::StudentProfile profile;
  profile.default_error_rate = 0.2;
  profile.backward_preference = 0.5;
  profile.hint_rate = 0.3;
  spec.groups.push_back({"C", an::Condition::kControl, 2, profile});
  spec.groups.push_back({"G", an::Condition::kGpp, 2, profile});

  testutil::TempDir one("cohort1"), two("cohort2");
  const auto a = sim::RunCohort(testutil::SharedCurriculum(), spec, 17, one.path());
  sim::RunCohort(testutil::SharedCurriculum(), spec, 17, two.path());
  for (const auto& id : a.students) {
    EXPECT_EQ(testutil::ReadText(one.path() / "sessions" / (id + ".jsonl")),
              testutil::ReadText(two.path() / "sessions" / (id + ".jsonl")));
  }
  EXPECT_THROW(sim::RunCohort(testutil::SharedCurriculum(), spec, 17, one.path()), sim::SimulationError);

  const auto logs = an::LoadLogDirectory(one.path() / "sessions");
  ASSERT_EQ(logs.size(), 4u);
  for (const auto& log : logs) {
    const auto& truth = a.truth.at(log.student);
    for (const auto phase : {an::Phase::kPretest, an::Phase::kTraining, an::Phase::kLevelEnd, an::Phase::kPosttest}) {
      std::vector<an::AttemptRecord> records;
      for (const auto& r : log.records) {
        if (r.phase == phase) records.push_back(r);
      }
      const auto m = an::Count(records);
      const auto it = truth.by_phase.find(phase);
      const sim::GroundTruth::Counts expected = it == truth.by_phase.end() ? sim::GroundTruth::Counts{} : it->second;
      EXPECT_EQ(m.attempts, expected.attempts) << log.student;
      EXPECT_EQ(m.incorrect, expected.incorrect) << log.student;
      EXPECT_EQ(m.backward, expected.backward) << log.student;
    }
    EXPECT_EQ(static_cast<int>(log.explanations.size()), truth.explanations);
  }

  const auto report = an::AnalyzeStudy(logs, a.baselines);
  EXPECT_EQ(report.students.size(), 4u);
  EXPECT_FALSE(report.comparisons.empty());
  EXPECT_FALSE(an::FormatTables(report).empty());
  EXPECT_NE(an::ToCsv(report).find("nlg"), std::string::npos);
}

}  // namespace
