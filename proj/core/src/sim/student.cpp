#include "gpptutor/sim/student.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "gpptutor/logic/parser.hpp"
#include "gpptutor/proof/proof_state.hpp"

namespace gpptutor::sim {

namespace {

using logic::Formula;
using proof::NodeId;
using proof::StepAttempt;
using proof::StepRequest;

constexpr int kMaxErrorsPerStep = 64;
constexpr int kMaxAdvances = 1000;

struct CanvasNode {
  NodeId id;
  Formula statement;
  bool justified;
};

class Canvas {
 public:
  virtual ~Canvas() = default;
  virtual std::vector<CanvasNode> Nodes() = 0;
  virtual service::StepResult Submit(const StepRequest& request, proof::Timestamp t) = 0;
};

class LocalCanvas final : public Canvas {
 public:
  LocalCanvas(proof::ProofState& state, const logic::RuleCatalog& catalog) : state_(state), catalog_(catalog) {}

  std::vector<CanvasNode> Nodes() override {
    std::vector<CanvasNode> out;
    for (const auto& n : state_.nodes()) {
      out.push_back({n.id, n.statement, n.origin == proof::NodeOrigin::kGiven || n.justified()});
    }
    return out;
  }

  service::StepResult Submit(const StepRequest& request, proof::Timestamp t) override {
    StepAttempt attempt = state_.Submit(catalog_, request, t);
    return {std::move(attempt), std::nullopt, state_.IsComplete()};
  }

 private:
  proof::ProofState& state_;
  const logic::RuleCatalog& catalog_;
};

class ServiceCanvas final : public Canvas {
 public:
  ServiceCanvas(service::TutorService& tutor, const std::string& session, const proof::Timestamp& clock)
      : tutor_(tutor), session_(session), clock_(clock) {}

  std::vector<CanvasNode> Nodes() override {
    const nlohmann::json view = tutor_.CurrentProblem(session_, clock_);
    std::vector<CanvasNode> out;
    for (const auto& n : view.at("nodes")) {
      out.push_back({n.at("id").get<std::string>(), logic::ParseFormula(n.at("statement").get<std::string>()),
                     n.at("justified").get<bool>()});
    }
    return out;
  }

  service::StepResult Submit(const StepRequest& request, proof::Timestamp t) override {
    return tutor_.SubmitStep(session_, {false, request}, t);
  }

 private:
  service::TutorService& tutor_;
  const std::string& session_;
  const proof::Timestamp& clock_;
};

const CanvasNode* FindNode(const std::vector<CanvasNode>& nodes, const Formula& statement,
                           std::optional<bool> justified) {
  for (const auto& n : nodes) {
    if (n.statement == statement && (!justified || n.justified == *justified)) return &n;
  }
  return nullptr;
}

std::uint32_t VariablesOf(const proof::SolutionGraph& graph) {
  std::uint32_t mask = 0;
  for (const auto& n : graph.nodes) mask |= n.statement.variables();
  return mask;
}

std::set<NodeId> AncestorsOfConclusion(const proof::SolutionGraph& route) {
  std::set<NodeId> seen;
  std::vector<NodeId> stack = {route.conclusion};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const proof::ProofNode* n = route.Find(id);
    if (n != nullptr && n->justification) {
      for (const auto& p : n->justification->parents) stack.push_back(p);
    }
  }
  return seen;
}

}  // namespace

class Solver {
 public:
  Solver(SimulatedStudent& student, Canvas& canvas, proof::Timestamp& clock, GroundTruth::Counts& counts)
      : student_(student), canvas_(canvas), clock_(clock), counts_(counts) {}

  proof::Timestamp Tick() {
    const StudentProfile& p = student_.profile_;
    const double ms = student_.rng_.LogNormal(p.think_mu, p.think_sigma);
    clock_ += std::max<proof::Timestamp>(1, std::llround(ms));
    return clock_;
  }

  void SolveProblem(const proof::SolutionGraph& route) {
    const std::vector<NodeId> order = route.TopologicalOrder();
    CheckBudget(route.conclusion_node().statement, order.size());
    reserved_ = VariablesOf(route);
    const bool backward = student_.rng_.Chance(student_.profile_.backward_preference);
    if (!backward) {
      for (const auto& id : order) {
        MaybeDetour();
        DeriveForward(route, *route.Find(id));
      }
      return;
    }
    const std::set<NodeId> needed = AncestorsOfConclusion(route);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (!needed.contains(*it)) continue;
      MaybeDetour();
      JustifyBackward(route, *route.Find(*it));
    }
    for (const auto& id : order) {
      if (needed.contains(id)) continue;
      MaybeDetour();
      DeriveForward(route, *route.Find(id));
    }
  }

  void SolveGuided(const gpp::GppProblem& gpp, const std::function<std::optional<gpp::Hint>()>& ask) {
    CheckBudget(gpp.problem.conclusion, gpp.unjustified.size());
    std::set<NodeId> hinted;
    for (const auto& target : gpp.unjustified) {
      if (student_.rng_.Chance(student_.profile_.hint_rate)) {
        if (auto h = ask()) {
          hinted.insert(h->target);
          ++counts_.hints;
        }
      }
      const proof::Justification& just = gpp.ExpertJustification(target);
      StepRequest request;
      request.direction = proof::Direction::kBackward;
      request.rule = just.rule;
      request.target = target;
      std::vector<Formula> parent_statements;
      for (const auto& p : just.parents) {
        request.parents.emplace_back(p);
        parent_statements.push_back(gpp.solution.Find(p)->statement);
      }
      Perform(request, gpp.solution.Find(target)->statement, parent_statements, &hinted);
    }
  }

 private:
  void CheckBudget(const Formula& conclusion, std::size_t needed) {
    const int budget = student_.profile_.step_budget;
    if (budget > 0 && needed > static_cast<std::size_t>(budget)) {
      throw SimulationError("proving " + logic::FormatFormula(conclusion) + " takes " + std::to_string(needed) +
                            " derivations, over the step budget of " + std::to_string(budget));
    }
    slack_ = budget > 0 ? budget - static_cast<int>(needed) : std::numeric_limits<int>::max();
  }

  void DeriveForward(const proof::SolutionGraph& route, const proof::ProofNode& node) {
    const std::vector<CanvasNode> nodes = canvas_.Nodes();
    StepRequest request;
    request.direction = proof::Direction::kForward;
    request.rule = node.justification->rule;
    request.declared = node.statement;
    std::vector<Formula> parent_statements;
    for (const auto& p : node.justification->parents) {
      const Formula& statement = route.Find(p)->statement;
      const CanvasNode* on_canvas = FindNode(nodes, statement, true);
      if (on_canvas == nullptr) throw SimulationError("forward parent missing from the canvas");
      request.parents.emplace_back(on_canvas->id);
      parent_statements.push_back(statement);
    }
    Perform(request, node.statement, parent_statements, nullptr);
  }

  void JustifyBackward(const proof::SolutionGraph& route, const proof::ProofNode& node) {
    const std::vector<CanvasNode> nodes = canvas_.Nodes();
    const CanvasNode* target = FindNode(nodes, node.statement, false);
    if (target == nullptr) throw SimulationError("backward target missing from the canvas");
    StepRequest request;
    request.direction = proof::Direction::kBackward;
    request.rule = node.justification->rule;
    request.target = target->id;
    std::vector<Formula> parent_statements;
    for (const auto& p : node.justification->parents) {
      const Formula& statement = route.Find(p)->statement;
      const CanvasNode* on_canvas = FindNode(nodes, statement, std::nullopt);
      if (on_canvas != nullptr) {
        request.parents.emplace_back(on_canvas->id);
      } else {
        request.parents.emplace_back(statement);
      }
      parent_statements.push_back(statement);
    }
    Perform(request, node.statement, parent_statements, nullptr);
  }

  void MaybeDetour() {
    if (slack_ <= 0 || !student_.rng_.Chance(student_.profile_.detour_rate)) return;
    const std::vector<CanvasNode> nodes = canvas_.Nodes();
    std::vector<const CanvasNode*> bases;
    std::uint32_t used = reserved_;
    for (const auto& n : nodes) {
      used |= n.statement.variables();
      if (n.justified) bases.push_back(&n);
    }
    std::vector<char> free;
    for (char c = 'A'; c <= 'Z'; ++c) {
      if ((used & (1u << (c - 'A'))) == 0) free.push_back(c);
    }
    if (bases.empty() || free.empty()) return;
    const CanvasNode& base = *bases[student_.rng_.Below(bases.size())];
    const char letter = free[student_.rng_.Below(free.size())];
    StepRequest request;
    request.direction = proof::Direction::kForward;
    request.rule = "Add";
    request.declared = Formula::Or(base.statement, Formula::Variable(letter));
    request.parents.emplace_back(base.id);
    Perform(request, *request.declared, {base.statement}, nullptr);
    ++counts_.detours;
    --slack_;
  }

  std::optional<StepRequest> MakeWrong(const StepRequest& right, const Formula& statement,
                                       const std::vector<Formula>& parents) {
    const logic::RuleCatalog& catalog = student_.catalog_;
    const logic::Rule& correct = catalog.At(right.rule);
    if (right.direction == proof::Direction::kForward && student_.rng_.Chance(0.5)) {
      std::vector<Formula> candidates = {Formula::Not(statement)};
      if (statement.is_negation()) candidates.insert(candidates.begin(), statement.operand());
      for (const auto& c : candidates) {
        if (!logic::CheckJustification(c, correct, parents)) {
          StepRequest wrong = right;
          wrong.declared = c;
          return wrong;
        }
      }
    }
    const auto rules = catalog.rules();
    const std::size_t offset = student_.rng_.Below(rules.size());
    for (std::size_t k = 0; k < rules.size(); ++k) {
      const logic::Rule& r = rules[(offset + k) % rules.size()];
      if (r.id == right.rule || r.arity != static_cast<int>(parents.size())) continue;
      if (!logic::CheckJustification(statement, r, parents)) {
        StepRequest wrong = right;
        wrong.rule = r.id;
        return wrong;
      }
    }
    return std::nullopt;
  }

  StepAttempt Perform(const StepRequest& right, const Formula& statement, const std::vector<Formula>& parents,
                      std::set<NodeId>* hinted) {
    const double e = student_.profile_.ErrorRate(student_.catalog_.At(right.rule).family);
    for (int i = 0; i < kMaxErrorsPerStep && student_.rng_.Chance(e); ++i) {
      const std::optional<StepRequest> wrong = MakeWrong(right, statement, parents);
      if (!wrong) break;
      Submit(*wrong, false, hinted);
    }
    return Submit(right, true, hinted);
  }

  StepAttempt Submit(const StepRequest& request, bool expect_correct, std::set<NodeId>* hinted) {
    const bool independent_backward =
        request.direction == proof::Direction::kBackward && (hinted == nullptr || !hinted->contains(request.target));
    service::StepResult r = canvas_.Submit(request, Tick());
    if (r.attempt.correct() != expect_correct) {
      throw SimulationError(std::string(expect_correct ? "expert" : "deliberately wrong") + " " + request.rule +
                            " step was judged " + std::string(proof::ToString(r.attempt.outcome)));
    }
    ++counts_.attempts;
    if (expect_correct) {
      ++counts_.correct;
    } else {
      ++counts_.incorrect;
    }
    if (independent_backward) ++counts_.backward;
    if (r.auto_hint && hinted != nullptr) {
      hinted->insert(r.auto_hint->target);
      ++counts_.hints;
    }
    return r.attempt;
  }

  SimulatedStudent& student_;
  Canvas& canvas_;
  proof::Timestamp& clock_;
  GroundTruth::Counts& counts_;
  std::uint32_t reserved_ = 0;
  int slack_ = std::numeric_limits<int>::max();
};

GroundTruth::Counts GroundTruth::Total() const {
  Counts total;
  for (const auto& [phase, c] : by_phase) {
    total.attempts += c.attempts;
    total.correct += c.correct;
    total.incorrect += c.incorrect;
    total.backward += c.backward;
    total.hints += c.hints;
    total.detours += c.detours;
  }
  return total;
}

nlohmann::json GroundTruth::ToJson() const {
  nlohmann::json phases = nlohmann::json::object();
  for (const auto& [phase, c] : by_phase) {
    phases[std::string(analytics::ToString(phase))] = {{"attempts", c.attempts}, {"correct", c.correct},
                                                       {"incorrect", c.incorrect}, {"backward", c.backward},
                                                       {"hints", c.hints},       {"detours", c.detours}};
  }
  return {{"phases", phases}, {"explanations", explanations}};
}

SimulatedStudent::SimulatedStudent(StudentProfile profile, std::uint64_t seed, const logic::RuleCatalog& catalog)
    : profile_(std::move(profile)), rng_(seed), catalog_(catalog) {
  profile_.Validate();
}

proof::SolutionGraph SimulatedStudent::SolveLocally(const proof::Problem& problem, const proof::SolutionGraph& route,
                                                    proof::Timestamp start) {
  proof::ProofState state = proof::ProofState::ForProblem(problem, start);
  LocalCanvas canvas(state, catalog_);
  proof::Timestamp clock = start;
  GroundTruth::Counts counts;
  Solver(*this, canvas, clock, counts).SolveProblem(route);
  if (!state.IsComplete()) throw SimulationError("simulated proof of " + problem.id + " is incomplete");

  proof::SolutionGraph out;
  for (const auto& n : state.nodes()) {
    if (n.origin != proof::NodeOrigin::kGiven && !n.justified()) continue;
    out.nodes.push_back(n);
    if (n.justified() && n.statement == problem.conclusion) out.conclusion = n.id;
  }
  return out;
}

void SimulatedStudent::RunSession(service::TutorService& tutor, const std::string& session,
                                  analytics::Condition condition, proof::Timestamp& clock, GroundTruth& truth) {
  const service::Curriculum& curriculum = tutor.curriculum();
  for (int i = 0; i < curriculum.size(); ++i) {
    ServiceCanvas canvas(tutor, session, clock);
    GroundTruth::Counts scratch;
    Solver solver(*this, canvas, clock, scratch);
    if (i == service::Curriculum::kPretestProblems) tutor.AssignCondition(session, condition, solver.Tick());

    const nlohmann::json view = tutor.CurrentProblem(session, solver.Tick());
    const service::CurriculumSlot& slot = curriculum.slot(view.at("slot").get<int>());
    const analytics::Mode mode = analytics::ModeFromString(view.at("mode").get<std::string>());
    GroundTruth::Counts& counts = truth.by_phase[slot.phase];
    Solver worker(*this, canvas, clock, counts);

    switch (mode) {
      case analytics::Mode::kWorkedExample: {
        int advances = 0;
        while (!tutor.SubmitStep(session, {true, {}}, worker.Tick()).complete) {
          if (++advances > kMaxAdvances) throw SimulationError("worked example never completed");
        }
        break;
      }
      case analytics::Mode::kProblemSolving:
        worker.SolveProblem(*slot.problem.solution);
        break;
      case analytics::Mode::kGuidedParsons:
        worker.SolveGuided(*slot.gpp, [&]() -> std::optional<gpp::Hint> {
          return tutor.RequestHint(session, worker.Tick());
        });
        break;
    }
    tutor.CompleteProblem(session, worker.Tick());
    if (mode == analytics::Mode::kGuidedParsons) {
      tutor.SubmitExplanation(session, kSyntheticExplanation, true, worker.Tick());
      ++truth.explanations;
    }
  }
}

}  // namespace gpptutor::sim
