#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/problem.hpp"
#include "gpptutor/sim/profile.hpp"

namespace gpptutor::sim {

/// `n` simulated student proofs of `problem`, each following the expert
/// solution with the profile's detours. Deterministic in `seed`.
std::vector<proof::SolutionGraph> GenerateCorpus(const proof::Problem& problem, std::size_t n,
                                                 const StudentProfile& profile, std::uint64_t seed,
                                                 const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

/// Route variant followed by a fixed share of the corpus.
struct RouteShare {
  proof::SolutionGraph route;
  std::size_t count = 0;
};

/// Corpus where exactly `count` students follow each route. The order of
/// students is shuffled by `seed`.
std::vector<proof::SolutionGraph> GenerateCorpus(const proof::Problem& problem, std::span<const RouteShare> routes,
                                                 const StudentProfile& profile, std::uint64_t seed,
                                                 const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

/// Profile used to build mining corpora: expert routes with occasional
/// detours and no errors.
StudentProfile CorpusProfile();

/// Walkthrough corpus: 20 expert-route and 30 shortcut-route proofs.
std::vector<proof::SolutionGraph> WalkthroughCorpus(std::uint64_t seed);

struct GeneratedCurriculum {
  std::vector<proof::Problem> problems;
  std::vector<std::optional<gpp::ChunkModel>> chunks;  // mined for training problems
};

/// Full 28-problem sequence with generated problems sized by level. The
/// first level-2 problem is the walkthrough problem. Chunk models come
/// from simulated corpora of `corpus_size` proofs.
GeneratedCurriculum GenerateCurriculum(std::uint64_t seed, std::size_t corpus_size = 20,
                                       const logic::RuleCatalog& catalog = logic::RuleCatalog::Standard());

}  // namespace gpptutor::sim
