#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpptutor/proof/problem.hpp"
#include "gpptutor/proof/proof_state.hpp"

namespace gpptutor::proof {

// JSON shapes (formulas are always strings in the canonical Unicode syntax):
//
//   problem  {"id", "level", "premises": [str], "conclusion": str,
//             "solution"?: {"conclusion": id, "steps": [{"id", "statement", "rule", "parents"}]}}
//   attempt  {"t", "direction", "rule", "parents": [id | {"statement": str}],
//             "declared"?, "target"?, "worked"?, "hint_directed"?, "outcome", "node"?, "duplicate"?}
//   state    {"problem", "conclusion", "start", "completed"?, "nodes": [...], "history": [attempt]}

nlohmann::json ToJson(const logic::Formula& f);
logic::Formula FormulaFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const ProofNode& node);
ProofNode ProofNodeFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const SolutionGraph& solution);
/// `premises` supplies the given nodes "1".."n", which solution files omit.
SolutionGraph SolutionFromJson(const nlohmann::json& j, std::span<const logic::Formula> premises);

nlohmann::json ToJson(const Problem& problem);
Problem ProblemFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const StepRequest& request);
StepRequest StepRequestFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const StepAttempt& attempt);
StepAttempt StepAttemptFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const ProofState& state);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j);
/// One JSON value per non-empty line.
std::vector<nlohmann::json> ReadJsonLines(const std::filesystem::path& path);

}  // namespace gpptutor::proof
