#include "gpptutor/proof/serialization.hpp"

#include <fstream>
#include <stdexcept>

#include "gpptutor/logic/parser.hpp"

namespace gpptutor::proof {

using nlohmann::json;

json ToJson(const logic::Formula& f) { return logic::FormatFormula(f); }

logic::Formula FormulaFromJson(const json& j) { return logic::ParseFormula(j.get<std::string>()); }

json ToJson(const ProofNode& node) {
  json j = {{"id", node.id}, {"statement", ToJson(node.statement)}, {"origin", ToString(node.origin)}};
  if (node.justification) {
    j["rule"] = node.justification->rule;
    j["parents"] = node.justification->parents;
  }
  return j;
}

ProofNode ProofNodeFromJson(const json& j) {
  ProofNode n{j.at("id").get<std::string>(), FormulaFromJson(j.at("statement")),
              NodeOriginFromString(j.value("origin", std::string("derived"))), std::nullopt};
  if (j.contains("rule")) {
    n.justification = Justification{j.at("rule").get<std::string>(), j.at("parents").get<std::vector<NodeId>>()};
  }
  return n;
}

json ToJson(const SolutionGraph& solution) {
  json steps = json::array();
  for (const auto& n : solution.nodes) {
    if (n.origin == NodeOrigin::kGiven) continue;
    json s = {{"id", n.id}, {"statement", ToJson(n.statement)}};
    if (n.justification) {
      s["rule"] = n.justification->rule;
      s["parents"] = n.justification->parents;
    }
    steps.push_back(std::move(s));
  }
  return {{"conclusion", solution.conclusion}, {"steps", std::move(steps)}};
}

SolutionGraph SolutionFromJson(const json& j, std::span<const logic::Formula> premises) {
  std::vector<SolutionStep> steps;
  for (const auto& s : j.at("steps")) {
    steps.push_back({s.at("id").get<std::string>(), FormulaFromJson(s.at("statement")),
                     s.at("rule").get<std::string>(), s.at("parents").get<std::vector<NodeId>>()});
  }
  SolutionGraph g = MakeSolution(premises, steps);
  if (j.contains("conclusion")) g.conclusion = j.at("conclusion").get<std::string>();
  return g;
}

json ToJson(const Problem& problem) {
  json premises = json::array();
  for (const auto& p : problem.premises) premises.push_back(ToJson(p));
  json j = {{"id", problem.id},
            {"level", problem.level},
            {"premises", std::move(premises)},
            {"conclusion", ToJson(problem.conclusion)}};
  if (problem.solution) j["solution"] = ToJson(*problem.solution);
  return j;
}

Problem ProblemFromJson(const json& j) {
  std::vector<logic::Formula> premises;
  for (const auto& p : j.at("premises")) premises.push_back(FormulaFromJson(p));
  Problem p{j.at("id").get<std::string>(), j.value("level", 1), premises, FormulaFromJson(j.at("conclusion")),
            std::nullopt};
  if (j.contains("solution") && !j.at("solution").is_null()) p.solution = SolutionFromJson(j.at("solution"), premises);
  return p;
}

json ToJson(const StepRequest& r) {
  json parents = json::array();
  for (const auto& ref : r.parents) {
    if (const NodeId* id = std::get_if<NodeId>(&ref)) {
      parents.push_back(*id);
    } else {
      parents.push_back({{"statement", ToJson(std::get<logic::Formula>(ref))}});
    }
  }
  json j = {{"direction", ToString(r.direction)}, {"rule", r.rule}, {"parents", std::move(parents)}};
  if (r.declared) j["declared"] = ToJson(*r.declared);
  if (!r.target.empty()) j["target"] = r.target;
  if (r.worked) j["worked"] = true;
  if (r.hint_directed) j["hint_directed"] = true;
  return j;
}

StepRequest StepRequestFromJson(const json& j) {
  StepRequest r;
  r.direction = DirectionFromString(j.at("direction").get<std::string>());
  r.rule = j.at("rule").get<std::string>();
  for (const auto& p : j.at("parents")) {
    if (p.is_string()) {
      r.parents.emplace_back(p.get<std::string>());
    } else {
      r.parents.emplace_back(FormulaFromJson(p.at("statement")));
    }
  }
  if (j.contains("declared")) r.declared = FormulaFromJson(j.at("declared"));
  r.target = j.value("target", std::string());
  r.worked = j.value("worked", false);
  r.hint_directed = j.value("hint_directed", false);
  return r;
}

json ToJson(const StepAttempt& a) {
  json j = ToJson(a.request);
  j["t"] = a.timestamp;
  j["outcome"] = ToString(a.outcome);
  if (!a.node.empty()) j["node"] = a.node;
  if (a.duplicate) j["duplicate"] = true;
  return j;
}

StepAttempt StepAttemptFromJson(const json& j) {
  StepAttempt a;
  a.request = StepRequestFromJson(j);
  a.timestamp = j.at("t").get<Timestamp>();
  a.outcome = OutcomeFromString(j.at("outcome").get<std::string>());
  a.node = j.value("node", std::string());
  a.duplicate = j.value("duplicate", false);
  return a;
}

json ToJson(const ProofState& state) {
  json nodes = json::array();
  for (const auto& n : state.nodes()) nodes.push_back(ToJson(n));
  json history = json::array();
  for (const auto& a : state.history()) history.push_back(ToJson(a));
  json j = {{"problem", state.problem_id()},
            {"conclusion", ToJson(state.conclusion())},
            {"start", state.start_time()},
            {"complete", state.IsComplete()},
            {"nodes", std::move(nodes)},
            {"history", std::move(history)}};
  if (state.completion_time()) j["completed"] = *state.completion_time();
  return j;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

}  // namespace gpptutor::proof
