#include "gpptutor/sim/corpus.hpp"

#include <string>

#include "gpptutor/service/curriculum.hpp"
#include "gpptutor/sim/problem_generator.hpp"
#include "gpptutor/sim/student.hpp"

namespace gpptutor::sim {

namespace {

std::string SlotId(int index) {
  using service::Curriculum;
  const analytics::Phase phase = Curriculum::PhaseOf(index);
  if (phase == analytics::Phase::kPretest) return "pre-" + std::to_string(index + 1);
  if (phase == analytics::Phase::kPosttest) {
    return "post-" + std::to_string(index - Curriculum::kPretestProblems -
                                    Curriculum::kTrainingLevels * Curriculum::kProblemsPerLevel + 1);
  }
  const int within = (index - Curriculum::kPretestProblems) % Curriculum::kProblemsPerLevel;
  return "L" + std::to_string(Curriculum::LevelOf(index)) + "-" + std::to_string(within + 1);
}

}  // namespace

std::vector<proof::SolutionGraph> GenerateCorpus(const proof::Problem& problem, std::size_t n,
                                                 const StudentProfile& profile, std::uint64_t seed,
                                                 const logic::RuleCatalog& catalog) {
  if (!problem.solution) throw SimulationError("problem " + problem.id + " has no expert solution");
  const RouteShare share{*problem.solution, n};
  return GenerateCorpus(problem, std::span<const RouteShare>(&share, 1), profile, seed, catalog);
}

std::vector<proof::SolutionGraph> GenerateCorpus(const proof::Problem& problem, std::span<const RouteShare> routes,
                                                 const StudentProfile& profile, std::uint64_t seed,
                                                 const logic::RuleCatalog& catalog) {
  std::vector<std::size_t> assignment;
  for (std::size_t r = 0; r < routes.size(); ++r) assignment.insert(assignment.end(), routes[r].count, r);
  SimRng rng(seed);
  for (std::size_t i = assignment.size(); i > 1; --i) std::swap(assignment[i - 1], assignment[rng.Below(i)]);

  std::vector<proof::SolutionGraph> corpus;
  corpus.reserve(assignment.size());
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    SimulatedStudent student(profile, MixSeed(seed, k + 1), catalog);
    corpus.push_back(student.SolveLocally(problem, routes[assignment[k]].route));
  }
  return corpus;
}

StudentProfile CorpusProfile() {
  StudentProfile p;
  p.detour_rate = 0.2;
  p.backward_preference = 0.3;
  return p;
}

std::vector<proof::SolutionGraph> WalkthroughCorpus(std::uint64_t seed) {
  const proof::Problem problem = WalkthroughProblem();
  const RouteShare routes[] = {{*problem.solution, 20}, {WalkthroughShortcutSolution(), 30}};
  return GenerateCorpus(problem, routes, CorpusProfile(), seed);
}

GeneratedCurriculum GenerateCurriculum(std::uint64_t seed, std::size_t corpus_size,
                                       const logic::RuleCatalog& catalog) {
  using service::Curriculum;
  GeneratedCurriculum out;
  ProblemGenerator generator(seed, catalog);
  const int walkthrough_slot = Curriculum::kPretestProblems;
  for (int i = 0; i < Curriculum::kTotalProblems; ++i) {
    const int level = Curriculum::LevelOf(i);
    const std::uint64_t corpus_seed = MixSeed(seed, 1000 + static_cast<std::uint64_t>(i));
    proof::Problem problem = i == walkthrough_slot ? WalkthroughProblem()
                                                   : generator.Generate(SlotId(i), level, ExpertStepsForLevel(level));
    problem.id = SlotId(i);

    std::optional<gpp::ChunkModel> chunks;
    if (Curriculum::PhaseOf(i) == analytics::Phase::kTraining) {
      const std::vector<proof::SolutionGraph> corpus =
          i == walkthrough_slot ? WalkthroughCorpus(corpus_seed)
                                : GenerateCorpus(problem, corpus_size, CorpusProfile(), corpus_seed, catalog);
      chunks = gpp::MineSubgoals(problem.id, corpus);
    }
    out.problems.push_back(std::move(problem));
    out.chunks.push_back(std::move(chunks));
  }
  return out;
}

}  // namespace gpptutor::sim
