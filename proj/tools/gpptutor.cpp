// gpptutor: command-line front end for the propositional logic tutor.
//
//   gpptutor rules
//   gpptutor mine --corpus corpus.jsonl --tau 0.5 --out chunks.json
//   gpptutor build-gpp --solution problem.json --chunks chunks.json --out gpp.json
//   gpptutor example --name walkthrough --out problem.json
//   gpptutor corpus --problem problem.json --n 50 --seed 7 --out corpus.jsonl
//   gpptutor curriculum --seed 7 --out curriculum.json
//   gpptutor simulate --curriculum curriculum.json --cohort cohort.json --seed 7 --out run/
//   gpptutor analyze --logs run/ --baselines run/baselines.json --report report.json
//   gpptutor serve      (GPPTUTOR_DATA_DIR, GPPTUTOR_SEED, GPPTUTOR_PORT, ...)

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpptutor/analytics/records.hpp"
#include "gpptutor/analytics/scoring.hpp"
#include "gpptutor/analytics/study.hpp"
#include "gpptutor/gpp/gpp_problem.hpp"
#include "gpptutor/gpp/mining.hpp"
#include "gpptutor/logic/rules.hpp"
#include "gpptutor/proof/serialization.hpp"
#include "gpptutor/service/curriculum.hpp"
#include "gpptutor/service/http_api.hpp"
#include "gpptutor/service/tutor_service.hpp"
#include "gpptutor/sim/cohort.hpp"
#include "gpptutor/sim/corpus.hpp"
#include "gpptutor/sim/problem_generator.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace gpptutor;

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string Env(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

gpp::GppConfig GppConfigFrom(int unjustified_per_chunk) {
  gpp::GppConfig c;
  if (unjustified_per_chunk < 0) {
    c.unjustified_per_chunk = std::nullopt;
  } else {
    c.unjustified_per_chunk = unjustified_per_chunk;
  }
  return c;
}

int CmdRules(const std::string& out) {
  const json j = logic::RuleCatalog::Standard().ToJson();
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    proof::WriteJsonFile(out, j);
  }
  return 0;
}

int CmdMine(const std::string& corpus_path, double tau, std::size_t min_support, const std::string& review,
            const std::string& out) {
  const std::vector<json> lines = proof::ReadJsonLines(corpus_path);
  if (lines.empty()) throw std::runtime_error(corpus_path + " holds no solutions");
  std::vector<proof::SolutionGraph> corpus;
  std::string problem_id;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const proof::Problem p = proof::ProblemFromJson(lines[i]);
    if (i == 0) problem_id = p.id;
    if (p.id != problem_id) throw std::runtime_error("corpus mixes problems " + problem_id + " and " + p.id);
    if (!p.solution) throw std::runtime_error("corpus line " + std::to_string(i + 1) + " has no solution");
    corpus.push_back(*p.solution);
  }
  gpp::ChunkModel model = gpp::MineSubgoals(problem_id, corpus, {tau, min_support});
  if (!review.empty()) model = gpp::ApplyReview(std::move(model), proof::ReadJsonFile(review));
  for (const auto& w : model.warnings) std::cerr << "warning: " << w << "\n";
  proof::WriteJsonFile(out, gpp::ToJson(model));
  std::cout << "mined " << model.chunks.size() << " chunk(s) from " << corpus.size() << " solution(s) -> " << out
            << "\n";
  return 0;
}

int CmdBuildGpp(const std::string& solution_path, const std::string& chunks_path, int unjustified,
                const std::string& out) {
  const proof::Problem problem = proof::ProblemFromJson(proof::ReadJsonFile(solution_path));
  if (!problem.solution) throw std::runtime_error(solution_path + " has no expert solution");
  const gpp::ChunkModel model = gpp::ChunkModelFromJson(proof::ReadJsonFile(chunks_path));
  const gpp::GppProblem g =
      gpp::BuildGpp(problem, model, logic::RuleCatalog::Standard(), GppConfigFrom(unjustified));
  proof::WriteJsonFile(out, gpp::ToJson(g));
  std::cout << "built GPP for " << problem.id << ": " << g.chunks.size() << " chunk(s), " << g.unjustified.size()
            << " unjustified node(s) -> " << out << "\n";
  return 0;
}

int CmdCorpus(const std::string& problem_path, bool walkthrough, std::size_t n, std::uint64_t seed,
              const std::string& profile_path, const std::string& out) {
  proof::Problem problem = sim::WalkthroughProblem();
  std::vector<proof::SolutionGraph> corpus;
  if (walkthrough) {
    corpus = sim::WalkthroughCorpus(seed);
  } else {
    if (problem_path.empty()) throw std::runtime_error("--problem or --walkthrough is required");
    problem = proof::ProblemFromJson(proof::ReadJsonFile(problem_path));
    const sim::StudentProfile profile = profile_path.empty()
                                            ? sim::CorpusProfile()
                                            : sim::StudentProfile::FromJson(proof::ReadJsonFile(profile_path));
    corpus = sim::GenerateCorpus(problem, n, profile, seed);
  }
  std::string text;
  for (const auto& s : corpus) {
    proof::Problem line = problem;
    line.solution = s;
    text += proof::ToJson(line).dump() + "\n";
  }
  WriteText(out, text);
  std::cout << "wrote " << corpus.size() << " solution(s) of " << problem.id << " -> " << out << "\n";
  return 0;
}

int CmdExample(const std::string& name, const std::string& out) {
  proof::Problem p = sim::WalkthroughProblem();
  if (name == "two-branch") {
    p = sim::TwoBranchProblem();
  } else if (name != "walkthrough") {
    throw std::runtime_error("unknown example " + name + " (walkthrough, two-branch)");
  }
  proof::WriteJsonFile(out, proof::ToJson(p));
  std::cout << "wrote " << p.id << " -> " << out << "\n";
  return 0;
}

int CmdCurriculum(std::uint64_t seed, std::size_t corpus_size, const std::string& out) {
  sim::GeneratedCurriculum g = sim::GenerateCurriculum(seed, corpus_size);
  const service::Curriculum c(std::move(g.problems), std::move(g.chunks), logic::RuleCatalog::Standard());
  proof::WriteJsonFile(out, c.ToJson());
  std::cout << "wrote " << c.size() << " problems -> " << out << "\n";
  return 0;
}

int CmdSimulate(const std::string& curriculum_path, const std::string& cohort_path, std::uint64_t seed,
                const std::string& out) {
  const auto& catalog = logic::RuleCatalog::Standard();
  auto curriculum =
      std::make_shared<const service::Curriculum>(service::Curriculum::FromJson(proof::ReadJsonFile(curriculum_path), catalog));
  const sim::CohortSpec spec = sim::CohortSpec::FromJson(proof::ReadJsonFile(cohort_path));
  const sim::CohortResult r = sim::RunCohort(curriculum, spec, seed, out, catalog);
  std::cout << "simulated " << r.students.size() << " student(s) -> " << out << "\n";
  return 0;
}

int CmdAnalyze(const std::string& logs, const std::string& baselines_path, const std::string& report,
               const std::string& tables, const std::string& csv, double alpha) {
  const std::vector<analytics::SessionLog> sessions = analytics::LoadLogDirectory(logs);
  const analytics::Baselines baselines = analytics::Baselines::FromJson(proof::ReadJsonFile(baselines_path));
  const analytics::StudyReport r = analytics::AnalyzeStudy(sessions, baselines, {alpha});
  proof::WriteJsonFile(report, analytics::ToJson(r));
  const std::string text = analytics::FormatTables(r);
  if (tables.empty()) {
    std::cout << text;
  } else {
    WriteText(tables, text);
  }
  if (!csv.empty()) WriteText(csv, analytics::ToCsv(r));
  return 0;
}

service::HttpApi* g_api = nullptr;

void StopServer(int) {
  if (g_api != nullptr) g_api->Stop();
}

int CmdServe() {
  const auto& catalog = logic::RuleCatalog::Standard();
  service::ServiceConfig config;
  config.data_dir = Env("GPPTUTOR_DATA_DIR", "data");
  config.seed = std::stoull(Env("GPPTUTOR_SEED", "0"));
  config.alternative_probability = std::stod(Env("GPPTUTOR_ALTERNATIVE_PROBABILITY", "0.5"));
  config.policy = service::AssignmentPolicyFromString(Env("GPPTUTOR_POLICY", "alternating"));
  const std::string baselines = Env("GPPTUTOR_BASELINES", "");
  if (!baselines.empty()) config.baselines = analytics::Baselines::FromJson(proof::ReadJsonFile(baselines));
  const std::string host = Env("GPPTUTOR_HOST", "0.0.0.0");
  const int port = std::stoi(Env("GPPTUTOR_PORT", "8080"));

  const std::string curriculum_path = Env("GPPTUTOR_CURRICULUM", "");
  std::shared_ptr<const service::Curriculum> curriculum;
  if (curriculum_path.empty()) {
    sim::GeneratedCurriculum g = sim::GenerateCurriculum(config.seed);
    curriculum = std::make_shared<const service::Curriculum>(std::move(g.problems), std::move(g.chunks), catalog);
  } else {
    curriculum = std::make_shared<const service::Curriculum>(
        service::Curriculum::FromJson(proof::ReadJsonFile(curriculum_path), catalog));
  }

  service::TutorService tutor(curriculum, catalog, config);
  service::HttpApi api(tutor);
  g_api = &api;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cout << "serving " << tutor.SessionIds().size() << " restored session(s) on " << host << ":" << port
            << " (data " << config.data_dir.string() << ")" << std::endl;
  const bool ok = api.Listen(host, port);
  g_api = nullptr;
  if (!ok) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propositional logic tutor with Guided Parsons Problems"};
  app.require_subcommand(1);

  std::string out;
  auto* rules = app.add_subcommand("rules", "Print the rule catalog as JSON");
  rules->add_option("--out", out, "Write to a file instead of stdout");

  std::string corpus_path;
  double tau = 0.5;
  std::size_t min_support = 1;
  std::string review;
  auto* mine = app.add_subcommand("mine", "Mine subgoal chunks from a corpus of solutions");
  mine->add_option("--corpus", corpus_path, "JSON Lines, one solved problem per line")->required();
  mine->add_option("--tau", tau, "Support and co-derivation threshold")->check(CLI::Range(0.0, 1.0));
  mine->add_option("--min-support", min_support, "Minimum absolute support count");
  mine->add_option("--review", review, "Review document to apply");
  mine->add_option("--out", out, "Chunk model output")->required();

  std::string solution_path;
  std::string chunks_path;
  int unjustified = 1;
  auto* build = app.add_subcommand("build-gpp", "Build a Guided Parsons Problem from a solution and chunks");
  build->add_option("--solution", solution_path, "Problem JSON with expert solution")->required();
  build->add_option("--chunks", chunks_path, "Chunk model JSON")->required();
  build->add_option("--unjustified-per-chunk", unjustified, "Members left unjustified per chunk; -1 strips all");
  build->add_option("--out", out, "GPP output")->required();

  std::string problem_path;
  bool walkthrough = false;
  std::size_t n = 50;
  std::uint64_t seed = 0;
  std::string profile_path;
  auto* corpus = app.add_subcommand("corpus", "Generate a corpus of simulated solutions");
  corpus->add_option("--problem", problem_path, "Problem JSON with expert solution");
  corpus->add_flag("--walkthrough", walkthrough, "Two-route corpus for the built-in walkthrough problem");
  corpus->add_option("--n", n, "Number of solutions");
  corpus->add_option("--seed", seed, "Random seed");
  corpus->add_option("--profile", profile_path, "Student profile JSON");
  corpus->add_option("--out", out, "JSON Lines output")->required();

  std::string example_name = "walkthrough";
  auto* example = app.add_subcommand("example", "Write a built-in example problem with its expert solution");
  example->add_option("--name", example_name, "walkthrough or two-branch");
  example->add_option("--out", out, "Problem output")->required();

  std::size_t corpus_size = 20;
  auto* curriculum = app.add_subcommand("curriculum", "Generate a 28-problem curriculum with mined chunks");
  curriculum->add_option("--seed", seed, "Random seed");
  curriculum->add_option("--corpus-size", corpus_size, "Simulated proofs mined per training problem");
  curriculum->add_option("--out", out, "Curriculum output")->required();

  std::string curriculum_path;
  std::string cohort_path;
  auto* simulate = app.add_subcommand("simulate", "Run a simulated cohort through an embedded tutor");
  simulate->add_option("--curriculum", curriculum_path, "Curriculum JSON")->required();
  simulate->add_option("--cohort", cohort_path, "Cohort JSON")->required();
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--out", out, "Output directory")->required();

  std::string logs;
  std::string baselines;
  std::string report;
  std::string tables;
  std::string csv;
  double alpha = 0.05;
  auto* analyze = app.add_subcommand("analyze", "Score session logs and compare conditions");
  analyze->add_option("--logs", logs, "Log directory")->required();
  analyze->add_option("--baselines", baselines, "Baselines JSON")->required();
  analyze->add_option("--report", report, "JSON report output")->required();
  analyze->add_option("--tables", tables, "Write the text tables here instead of stdout");
  analyze->add_option("--csv", csv, "Per-student CSV output");
  analyze->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API (configured by GPPTUTOR_* variables)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rules) return CmdRules(out);
    if (*mine) return CmdMine(corpus_path, tau, min_support, review, out);
    if (*build) return CmdBuildGpp(solution_path, chunks_path, unjustified, out);
    if (*corpus) return CmdCorpus(problem_path, walkthrough, n, seed, profile_path, out);
    if (*example) return CmdExample(example_name, out);
    if (*curriculum) return CmdCurriculum(seed, corpus_size, out);
    if (*simulate) return CmdSimulate(curriculum_path, cohort_path, seed, out);
    if (*analyze) return CmdAnalyze(logs, baselines, report, tables, csv, alpha);
    if (*serve) return CmdServe();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
