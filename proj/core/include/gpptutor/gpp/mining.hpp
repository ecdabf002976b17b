#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/logic/formula.hpp"
#include "gpptutor/proof/problem.hpp"

namespace gpptutor::gpp {

class MiningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MiningConfig {
  /// Minimum statement support and minimum co-derivation weight, both as a
  /// fraction of corpus solutions.
  double tau = 0.5;
  std::size_t min_support_count = 1;
};

struct Chunk {
  int index = 1;                        // 1-based, in dependency order
  std::vector<logic::Formula> members;  // canonical order; includes the subgoal
  logic::Formula subgoal;
  double support = 0.0;  // fraction of solutions containing every member
};

enum class ReviewStatus { kPending, kApproved, kOverridden };

struct ChunkModel {
  std::string problem_id;
  logic::Formula conclusion;
  std::size_t corpus_size = 0;
  double tau = 0.5;
  std::vector<Chunk> chunks;
  std::vector<std::string> warnings;
  ReviewStatus review = ReviewStatus::kPending;
  std::string reviewer;

  /// Chunk holding `statement`, or nullptr.
  const Chunk* ChunkOf(const logic::Formula& statement) const;
};

/// Co-derivation clustering over a corpus of solutions to one problem.
///
/// Statements (givens and the conclusion excluded) supported by at least tau
/// of the solutions are the core. Two core statements are related in a
/// solution when one justifies the other directly or through a single
/// non-core intermediate; pairs related in at least tau of the solutions are
/// linked, and the connected components of those links are the chunks. A
/// chunk's subgoal is its sink along the majority direction of its links.
/// Chunks are ordered by cross-chunk dependency, then by mean depth, then
/// canonically. Every count is taken over sets, so the model does not depend
/// on corpus order.
ChunkModel MineSubgoals(const std::string& problem_id, std::span<const proof::SolutionGraph> corpus,
                        const MiningConfig& config = {});

/// Reads a review document
///   {"reviewer": str, "decision": "approve" | "override",
///    "chunks"?: [{"members": [str], "subgoal": str}]}
/// and returns the reviewed model. An override replaces the chunk list.
ChunkModel ApplyReview(ChunkModel model, const nlohmann::json& review);

/// Members disjoint, subgoal among members, conclusion in no chunk unless
/// it is the lone member of the only chunk.
void ValidateChunks(const ChunkModel& model);

nlohmann::json ToJson(const ChunkModel& model);
ChunkModel ChunkModelFromJson(const nlohmann::json& j);

std::string_view ToString(ReviewStatus status);

}  // namespace gpptutor::gpp
