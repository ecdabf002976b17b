#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gpptutor/proof/problem.hpp"
#include "gpptutor/proof/proof_state.hpp"
#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/sim/problem_generator.hpp"
#include "test_util.hpp"

namespace {

using gpptutor::logic::Formula;
using gpptutor::logic::RuleCatalog;
using gpptutor::proof::Direction;
using gpptutor::proof::NodeId;
using gpptutor::proof::Outcome;
using gpptutor::proof::Problem;
using gpptutor::proof::ProofError;
using gpptutor::proof::ProofState;
using gpptutor::proof::StepAttempt;
using gpptutor::proof::StepRequest;
using testutil::F;

const RuleCatalog& Catalog() { return RuleCatalog::Standard(); }

StepRequest Forward(const std::string& rule, std::vector<NodeId> parents, const std::string& declared) {
  StepRequest r;
  r.direction = Direction::kForward;
  r.rule = rule;
  for (auto& p : parents) r.parents.emplace_back(std::move(p));
  r.declared = F(declared);
  return r;
}

StepRequest Backward(const NodeId& target, const std::string& rule, std::vector<gpptutor::proof::ParentRef> parents) {
  StepRequest r;
  r.direction = Direction::kBackward;
  r.rule = rule;
  r.target = target;
  r.parents = std::move(parents);
  return r;
}

ProofError::Code CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const ProofError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ProofError thrown";
  return ProofError::Code::kInvalidRequest;
}

TEST(ProofState, ForwardWalkthrough) {
  const Problem p = gpptutor::sim::WalkthroughProblem();
  ProofState s = ProofState::ForProblem(p, 1000);
  ASSERT_EQ(s.nodes().size(), 4u);
  EXPECT_EQ(s.nodes()[3].id, "C");
  EXPECT_FALSE(s.IsComplete());

  const StepAttempt a1 = s.DeriveForward(Catalog(), Forward("Simp", {"1"}, "F"), 1100);
  ASSERT_TRUE(a1.correct());
  const StepAttempt a2 = s.DeriveForward(Catalog(), Forward("MP", {a1.node, "2"}, "G ^ ~H"), 1200);
  ASSERT_TRUE(a2.correct());
  const StepAttempt bad = s.DeriveForward(Catalog(), Forward("MP", {a2.node, "2"}, "~H"), 1250);
  EXPECT_FALSE(bad.correct());
  const StepAttempt wrong_statement = s.DeriveForward(Catalog(), Forward("Simp", {a2.node}, "H"), 1260);
  EXPECT_EQ(wrong_statement.outcome, Outcome::kIncorrectStatement);
  const StepAttempt wrong_rule = s.DeriveForward(Catalog(), Forward("DeM", {a2.node}, "~H"), 1270);
  EXPECT_EQ(wrong_rule.outcome, Outcome::kIncorrectRule);
  const StepAttempt a3 = s.DeriveForward(Catalog(), Forward("Simp", {a2.node}, "~H"), 1300);
  const StepAttempt a4 = s.DeriveForward(Catalog(), Forward("DS", {"3", a3.node}, "J"), 1400);
  EXPECT_FALSE(s.IsComplete());
  const StepAttempt a5 = s.DeriveForward(Catalog(), Forward("Add", {a4.node}, "J v K"), 1500);
  ASSERT_TRUE(a5.correct());
  EXPECT_EQ(a5.node, "C");
  EXPECT_TRUE(s.IsComplete());
  EXPECT_EQ(s.completion_time(), 1500);
  EXPECT_EQ(s.history().size(), 8u);
}

TEST(ProofState, DuplicateDerivationIsFlagged) {
  ProofState s = ProofState::ForProblem(gpptutor::sim::WalkthroughProblem(), 0);
  const StepAttempt a = s.DeriveForward(Catalog(), Forward("Simp", {"1"}, "F"), 1);
  const StepAttempt b = s.DeriveForward(Catalog(), Forward("Simp", {"1"}, "F"), 2);
  EXPECT_FALSE(a.duplicate);
  EXPECT_TRUE(b.duplicate);
  EXPECT_NE(a.node, b.node);
}

TEST(ProofState, BackwardHypothesizesParentsOnlyWhenCorrect) {
  ProofState s = ProofState::ForProblem(gpptutor::sim::WalkthroughProblem(), 0);
  const StepAttempt wrong = s.HypothesizeBackward(Catalog(), Backward("C", "Simp", {F("J")}), 1);
  EXPECT_FALSE(wrong.correct());
  EXPECT_EQ(s.nodes().size(), 4u);

  const StepAttempt ok = s.HypothesizeBackward(Catalog(), Backward("C", "Add", {F("J")}), 2);
  ASSERT_TRUE(ok.correct());
  ASSERT_EQ(s.nodes().size(), 5u);
  const auto& j = s.nodes()[4];
  EXPECT_EQ(j.statement, F("J"));
  EXPECT_FALSE(j.justified());
  EXPECT_FALSE(s.IsComplete());

  ASSERT_TRUE(s.HypothesizeBackward(Catalog(), Backward(j.id, "DS", {NodeId("3"), F("~H")}), 3).correct());
  const NodeId not_h = s.nodes().back().id;
  ASSERT_TRUE(s.HypothesizeBackward(Catalog(), Backward(not_h, "Simp", {NodeId("1")}), 4).correct());
  EXPECT_TRUE(s.IsComplete());
}

TEST(ProofState, ForwardStepJustifiesHypothesizedNode) {
  ProofState s = ProofState::ForProblem(gpptutor::sim::WalkthroughProblem(), 0);
  ASSERT_TRUE(s.HypothesizeBackward(Catalog(), Backward("C", "Add", {F("J")}), 1).correct());
  const NodeId j = s.nodes().back().id;
  const StepAttempt not_h = s.DeriveForward(Catalog(), Forward("Simp", {"1"}, "~H"), 2);
  const StepAttempt jj = s.DeriveForward(Catalog(), Forward("DS", {"3", not_h.node}, "J"), 3);
  EXPECT_EQ(jj.node, j);
  EXPECT_TRUE(s.IsComplete());
}

TEST(ProofState, Errors) {
  ProofState s = ProofState::ForProblem(gpptutor::sim::WalkthroughProblem(), 0);
  EXPECT_EQ(CodeOf([&] { s.DeriveForward(Catalog(), Forward("Simp", {"9"}, "F"), 1); }),
            ProofError::Code::kUnknownNode);
  EXPECT_EQ(CodeOf([&] { s.DeriveForward(Catalog(), Forward("Add", {"C"}, "(J v K) v L"), 1); }),
            ProofError::Code::kUnjustifiedParent);
  EXPECT_EQ(CodeOf([&] { s.HypothesizeBackward(Catalog(), Backward("1", "Simp", {F("F ^ ~H ^ X")}), 1); }),
            ProofError::Code::kAlreadyJustified);
  EXPECT_EQ(CodeOf([&] {
              StepRequest r = Forward("Simp", {"1"}, "F");
              r.parents = {F("F ^ ~H")};
              s.DeriveForward(Catalog(), r, 1);
            }),
            ProofError::Code::kInvalidRequest);
  EXPECT_THROW(s.DeriveForward(Catalog(), Forward("Nope", {"1"}, "F"), 1), gpptutor::logic::UnknownRuleError);
  EXPECT_THROW(s.DeriveForward(Catalog(), Forward("MP", {"1"}, "F"), 1), gpptutor::logic::ArityError);
  EXPECT_TRUE(s.history().empty());
}

TEST(ProofState, BackwardCycleIsRejected) {
  ProofState s = ProofState::ForProblem(gpptutor::sim::WalkthroughProblem(), 0);
  ASSERT_TRUE(s.HypothesizeBackward(Catalog(), Backward("C", "Add", {F("J")}), 1).correct());
  const NodeId j = s.nodes().back().id;
  EXPECT_EQ(CodeOf([&] { s.HypothesizeBackward(Catalog(), Backward(j, "Simp", {NodeId("C")}), 2); }),
            ProofError::Code::kCycle);
}

TEST(ProofState, GuidedCanvasBackwardStep) {
  // GPP walkthrough canvas: 2.1 (¬H) justified by Simp from 1.C (G ∧ ¬H).
  std::vector<gpptutor::proof::ProofNode> nodes = {
      {"1", F("F ^ ~H"), gpptutor::proof::NodeOrigin::kGiven, std::nullopt},
      {"1.C", F("G ^ ~H"), gpptutor::proof::NodeOrigin::kProvided, std::nullopt},
      {"2.1", F("~H"), gpptutor::proof::NodeOrigin::kProvided, std::nullopt},
  };
  ProofState s = ProofState::WithNodes("p", F("J v K"), nodes, 0);
  EXPECT_TRUE(s.HypothesizeBackward(Catalog(), Backward("2.1", "Simp", {NodeId("1.C")}), 1).correct());
}

TEST(ProofState, ReplayReproducesStateAndDetectsTampering) {
  const Problem p = gpptutor::sim::WalkthroughProblem();
  ProofState s = ProofState::ForProblem(p, 0);
  const StepAttempt a1 = s.DeriveForward(Catalog(), Forward("Simp", {"1"}, "~H"), 10);
  s.DeriveForward(Catalog(), Forward("MP", {"1", "2"}, "F"), 20);
  const StepAttempt a3 = s.DeriveForward(Catalog(), Forward("DS", {"3", a1.node}, "J"), 30);
  s.HypothesizeBackward(Catalog(), Backward("C", "Add", {NodeId(a3.node)}), 40);
  ASSERT_TRUE(s.IsComplete());

  const std::vector<StepAttempt> log(s.history().begin(), s.history().end());
  const ProofState replayed = gpptutor::proof::ReplayLog(p, log, Catalog(), 0);
  EXPECT_EQ(gpptutor::proof::ToJson(replayed), gpptutor::proof::ToJson(s));

  std::vector<StepAttempt> tampered = log;
  tampered[1].outcome = Outcome::kCorrect;
  try {
    gpptutor::proof::ReplayLog(p, tampered, Catalog(), 0);
    FAIL() << "tampered log replayed";
  } catch (const gpptutor::proof::ReplayError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Solution, TopologicalOrderAndValidation) {
  const Problem p = gpptutor::sim::WalkthroughProblem();
  const auto& sol = *p.solution;
  EXPECT_EQ(sol.derived_count(), 5u);
  EXPECT_EQ(sol.TopologicalOrder(), (std::vector<NodeId>{"s1", "s2", "s3", "s4", "s5"}));
  EXPECT_NO_THROW(sol.Validate(Catalog()));
  EXPECT_NO_THROW(p.Validate(Catalog()));

  auto broken = sol;
  for (auto& n : broken.nodes) {
    if (n.id == "s3") n.justification->rule = "MP";
  }
  EXPECT_THROW(broken.Validate(Catalog()), ProofError);

  Problem not_entailed = p;
  not_entailed.solution.reset();
  not_entailed.conclusion = F("K");
  EXPECT_THROW(not_entailed.Validate(Catalog()), ProofError);
}

TEST(Serialization, RoundTrips) {
  const Problem p = gpptutor::sim::WalkthroughProblem();
  const Problem back = gpptutor::proof::ProblemFromJson(gpptutor::proof::ToJson(p));
  EXPECT_EQ(gpptutor::proof::ToJson(back), gpptutor::proof::ToJson(p));
  EXPECT_EQ(back.solution->TopologicalOrder(), p.solution->TopologicalOrder());

  StepRequest r = Backward("C", "Add", {F("J"), NodeId("3")});
  r.hint_directed = true;
  StepAttempt a{42, r, Outcome::kCorrect, "C", false};
  const auto j = gpptutor::proof::ToJson(a);
  EXPECT_EQ(j.at("parents")[0].at("statement"), "J");
  EXPECT_EQ(j.at("parents")[1], "3");
  const StepAttempt a2 = gpptutor::proof::StepAttemptFromJson(j);
  EXPECT_EQ(gpptutor::proof::ToJson(a2), j);
  EXPECT_EQ(gpptutor::proof::DirectionFromString("backward"), Direction::kBackward);
  EXPECT_EQ(gpptutor::proof::OutcomeFromString("incorrect-rule"), Outcome::kIncorrectRule);
}

TEST(Serialization, JsonFilesAndLines) {
  testutil::TempDir dir("serial");
  const auto path = dir.path() / "nested" / "x.json";
  gpptutor::proof::WriteJsonFile(path, {{"a", 1}});
  EXPECT_EQ(gpptutor::proof::ReadJsonFile(path).at("a"), 1);
  {
    std::ofstream out(dir.path() / "l.jsonl");
    out << "{\"a\":1}\n\n{\"a\":2}\n";
  }
  const auto lines = gpptutor::proof::ReadJsonLines(dir.path() / "l.jsonl");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].at("a"), 2);
}

}  // namespace
