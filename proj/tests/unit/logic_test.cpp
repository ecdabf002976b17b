#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gpptutor/logic/entailment.hpp"
#include "gpptutor/logic/formula.hpp"
#include "gpptutor/logic/parser.hpp"
#include "gpptutor/logic/rules.hpp"
#include "oracles.hpp"
#include "rule_instances.hpp"
#include "test_util.hpp"

namespace {

using gpptutor::logic::ApplyForward;
using gpptutor::logic::CheckJustification;
using gpptutor::logic::Formula;
using gpptutor::logic::FormatFormula;
using gpptutor::logic::Notation;
using gpptutor::logic::ParseError;
using gpptutor::logic::ParseFormula;
using gpptutor::logic::RuleCatalog;
using testutil::F;

const RuleCatalog& Catalog() { return RuleCatalog::Standard(); }

bool Licenses(const std::string& rule, const std::vector<std::string>& premises, const std::string& conclusion) {
  std::vector<Formula> ps;
  for (const auto& p : premises) ps.push_back(F(p));
  return CheckJustification(F(conclusion), Catalog().At(rule), ps);
}

TEST(Formula, StructuralEqualityAndCanonicalOrder) {
  EXPECT_EQ(F("A ^ B"), Formula::And(Formula::Variable('A'), Formula::Variable('B')));
  EXPECT_NE(F("A ^ B"), F("B ^ A"));
  EXPECT_LT(F("Z"), F("~A"));
  EXPECT_LT(F("~Z"), F("A ^ B"));
  std::set<Formula> s = {F("B"), F("A"), F("A ^ B"), F("~A")};
  std::vector<std::string> order;
  for (const auto& f : s) order.push_back(FormatFormula(f));
  EXPECT_EQ(order, (std::vector<std::string>{"A", "B", "¬A", "A ∧ B"}));
}

TEST(Formula, VariablesDepthAndSize) {
  const Formula f = F("(P -> Q) ^ ~R");
  EXPECT_EQ(f.variables(), (1u << ('P' - 'A')) | (1u << ('Q' - 'A')) | (1u << ('R' - 'A')));
  EXPECT_EQ(f.depth(), 2u);
  EXPECT_EQ(f.size(), 6u);
}

TEST(Parser, FixtureMatchesShuntingYardOracle) {
  std::ifstream in(testutil::Fixture("formulas.txt"));
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++count;
    EXPECT_EQ(ParseFormula(line), oracle::ShuntingYard(line)) << line;
  }
  EXPECT_EQ(count, 20);
}

TEST(Parser, PrecedenceAndAssociativity) {
  EXPECT_EQ(F("A -> B -> C"), F("A -> (B -> C)"));
  EXPECT_EQ(F("A v B v C"), F("(A v B) v C"));
  EXPECT_EQ(F("A ^ B v C"), F("(A ^ B) v C"));
  EXPECT_EQ(F("~A ^ B"), F("(~A) ^ B"));
  EXPECT_EQ(F("A <-> B -> C"), F("A <-> (B -> C)"));
  EXPECT_EQ(F("−H"), F("¬H"));
}

TEST(Parser, FormatsWithMinimalParentheses) {
  EXPECT_EQ(FormatFormula(F("F -> (G ^ ~H)")), "F → G ∧ ¬H");
  EXPECT_EQ(FormatFormula(F("(A -> B) -> C")), "(A → B) → C");
  EXPECT_EQ(FormatFormula(F("~(A v B)")), "¬(A ∨ B)");
  EXPECT_EQ(FormatFormula(F("A v (B v C)")), "A ∨ (B ∨ C)");
  EXPECT_EQ(FormatFormula(F("F -> (G ^ ~H)"), Notation::kAscii), "F -> G ^ ~H");
  EXPECT_EQ(gpptutor::logic::FormatInline(F("G ^ ~H")), "(G ∧ ¬H)");
  EXPECT_EQ(gpptutor::logic::FormatInline(F("J")), "J");
}

TEST(Parser, RejectsMalformedInputWithPosition) {
  for (const std::string bad : {"", "A ^", "(A v B", "A B", "a", "A -> -> B", ")"}) {
    try {
      ParseFormula(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const ParseError& e) {
      EXPECT_LE(e.position(), bad.size()) << bad;
    }
  }
}

TEST(Parser, RoundTripsRandomFormulas) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = oracle::RandomFormula(rng, 6, 8);
    EXPECT_EQ(ParseFormula(FormatFormula(f)), f);
    EXPECT_EQ(ParseFormula(FormatFormula(f, Notation::kAscii)), f);
  }
}

TEST(Rules, StandardCatalogShape) {
  EXPECT_EQ(Catalog().rules().size(), 12u);
  EXPECT_EQ(Catalog().At("Simp").name, "Simplification");
  EXPECT_EQ(Catalog().At("MP").arity, 2);
  EXPECT_TRUE(Catalog().At("Add").target_dependent);
  EXPECT_EQ(Catalog().Find("Nope"), nullptr);
  EXPECT_THROW(Catalog().At("Nope"), gpptutor::logic::UnknownRuleError);
  const RuleCatalog round = RuleCatalog::FromJson(Catalog().ToJson());
  EXPECT_EQ(round.ToJson(), Catalog().ToJson());
  const std::vector<std::string> ids = {"MP", "Simp"};
  EXPECT_EQ(Catalog().Restrict(ids).rules().size(), 2u);
}

TEST(Rules, WalkthroughJustifications) {
  EXPECT_TRUE(Licenses("Simp", {"F ^ ~H"}, "F"));
  EXPECT_TRUE(Licenses("Simp", {"F ^ ~H"}, "~H"));
  EXPECT_TRUE(Licenses("MP", {"F", "F -> G ^ ~H"}, "G ^ ~H"));
  EXPECT_TRUE(Licenses("MP", {"F -> G ^ ~H", "F"}, "G ^ ~H"));
  EXPECT_TRUE(Licenses("Simp", {"G ^ ~H"}, "~H"));
  EXPECT_TRUE(Licenses("DS", {"H v J", "~H"}, "J"));
  EXPECT_TRUE(Licenses("Add", {"J"}, "J v K"));
  EXPECT_FALSE(Licenses("DS", {"H v J", "~J"}, "J"));
  EXPECT_FALSE(Licenses("Add", {"J"}, "K v L"));
}

TEST(Rules, PatternExamples) {
  EXPECT_TRUE(Licenses("MT", {"P -> Q", "~Q"}, "~P"));
  EXPECT_TRUE(Licenses("HS", {"P -> Q", "Q -> R"}, "P -> R"));
  EXPECT_TRUE(Licenses("Conj", {"P", "Q"}, "P ^ Q"));
  EXPECT_TRUE(Licenses("Conj", {"P", "Q"}, "Q ^ P"));
  EXPECT_TRUE(Licenses("CD", {"(P -> Q) ^ (R -> S)", "P v R"}, "Q v S"));
  EXPECT_TRUE(Licenses("DeM", {"~(P ^ Q)"}, "~P v ~Q"));
  EXPECT_TRUE(Licenses("DeM", {"~P ^ ~Q"}, "~(P v Q)"));
  EXPECT_TRUE(Licenses("DN", {"P"}, "~~P"));
  EXPECT_TRUE(Licenses("DN", {"~~P"}, "P"));
  EXPECT_TRUE(Licenses("Comm", {"P v Q"}, "Q v P"));
  EXPECT_TRUE(Licenses("Impl", {"P -> Q"}, "~P v Q"));
  EXPECT_TRUE(Licenses("Impl", {"~P v Q"}, "P -> Q"));
  EXPECT_TRUE(Licenses("Add", {"P"}, "Q v P"));
  EXPECT_FALSE(Licenses("MT", {"P -> Q", "~P"}, "~Q"));
  EXPECT_FALSE(Licenses("HS", {"P -> Q", "R -> S"}, "P -> S"));
  EXPECT_FALSE(Licenses("Comm", {"P -> Q"}, "Q -> P"));
}

TEST(Rules, ArityMismatchThrows) {
  const std::vector<Formula> one = {F("P")};
  EXPECT_THROW(ApplyForward(Catalog().At("MP"), one), gpptutor::logic::ArityError);
  EXPECT_THROW(CheckJustification(F("P"), Catalog().At("MP"), one), gpptutor::logic::ArityError);
}

TEST(Rules, AdditionRequiresTarget) {
  const std::vector<Formula> one = {F("P")};
  const auto d = ApplyForward(Catalog().At("Add"), one);
  EXPECT_TRUE(d.requires_target);
  EXPECT_TRUE(d.conclusions.empty());
  EXPECT_TRUE(gpptutor::logic::RuleApplies(Catalog().At("Add"), one));
}

TEST(Rules, ForwardConclusionsAgreeWithCheck) {
  std::mt19937_64 rng(5);
  for (const auto& rule : Catalog().rules()) {
    if (rule.target_dependent) continue;
    for (int i = 0; i < 300; ++i) {
      std::vector<Formula> ps;
      for (int k = 0; k < rule.arity; ++k) ps.push_back(oracle::RandomFormula(rng, 3, 3));
      for (const auto& c : ApplyForward(rule, ps).conclusions) {
        EXPECT_TRUE(CheckJustification(c, rule, ps));
        EXPECT_TRUE(oracle::Entails(ps, c)) << rule.id;
      }
    }
  }
}

TEST(Rules, RandomInstancesAreAcceptedAndSound) {
  std::mt19937_64 rng(23);
  for (const auto& rule : Catalog().rules()) {
    for (int i = 0; i < 100; ++i) {
      const auto inst = oracle::RandomInstance(rule.id, rng);
      EXPECT_TRUE(CheckJustification(inst.conclusion, rule, inst.premises)) << rule.id;
      EXPECT_TRUE(oracle::Entails(inst.premises, inst.conclusion)) << rule.id;
      const Formula decoy = oracle::RandomFormula(rng, 3, 4);
      if (CheckJustification(decoy, rule, inst.premises)) {
        EXPECT_TRUE(oracle::Entails(inst.premises, decoy)) << rule.id;
      }
    }
  }
}

TEST(Entailment, MatchesTruthTableOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    std::vector<Formula> ps = {oracle::RandomFormula(rng, 3, 4), oracle::RandomFormula(rng, 3, 4)};
    const Formula c = oracle::RandomFormula(rng, 3, 4);
    EXPECT_EQ(gpptutor::logic::Entails(ps, c), oracle::Entails(ps, c));
    const auto counter = gpptutor::logic::FindCountermodel(ps, c);
    EXPECT_EQ(counter.has_value(), !oracle::Entails(ps, c));
    if (counter) {
      for (const auto& p : ps) EXPECT_TRUE(p.Evaluate(*counter));
      EXPECT_FALSE(c.Evaluate(*counter));
    }
  }
}

TEST(Entailment, WalkthroughPremisesEntailConclusion) {
  const std::vector<Formula> ps = {F("F ^ ~H"), F("F -> G ^ ~H"), F("H v J")};
  EXPECT_TRUE(gpptutor::logic::Entails(ps, F("J v K")));
  EXPECT_FALSE(gpptutor::logic::Entails(ps, F("K")));
}

TEST(Entailment, VariableBudget) {
  Formula big = Formula::Variable('A');
  for (char c = 'B'; c <= 'U'; ++c) big = Formula::And(big, Formula::Variable(c));
  const std::vector<Formula> ps = {big};
  EXPECT_THROW(gpptutor::logic::Entails(ps, F("A")), gpptutor::logic::VariableBudgetError);
}

}  // namespace
