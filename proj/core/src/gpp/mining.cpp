#include "gpptutor/gpp/mining.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "gpptutor/logic/parser.hpp"

namespace gpptutor::gpp {

namespace {

using logic::Formula;
using Pair = std::pair<Formula, Formula>;

bool AtLeast(std::size_t count, std::size_t total, double tau) {
  return static_cast<double>(count) + 1e-9 >= tau * static_cast<double>(total);
}

/// What one solution contributes to the counts.
struct SolutionFacts {
  std::set<Formula> derived;                  // non-given, non-conclusion statements
  std::map<Formula, std::int64_t> depth;      // longest justification chain from the givens
  std::map<Formula, std::vector<Formula>> parents;  // statement-level justification edges
};

SolutionFacts Collect(const proof::SolutionGraph& g, const Formula& conclusion) {
  SolutionFacts facts;
  std::map<proof::NodeId, const proof::ProofNode*> by_id;
  for (const auto& n : g.nodes) by_id[n.id] = &n;
  std::map<proof::NodeId, std::int64_t> depth;
  for (const auto& n : g.nodes) {
    if (n.origin == proof::NodeOrigin::kGiven) depth[n.id] = 0;
  }
  for (const auto& id : g.TopologicalOrder()) {
    const proof::ProofNode& n = *by_id.at(id);
    std::int64_t d = 0;
    std::vector<Formula> parents;
    if (n.justification) {
      for (const auto& p : n.justification->parents) {
        d = std::max(d, depth.at(p));
        parents.push_back(by_id.at(p)->statement);
      }
    }
    depth[id] = d + 1;
    facts.depth[n.statement] = d + 1;
    facts.parents[n.statement] = std::move(parents);
    if (!(n.statement == conclusion)) facts.derived.insert(n.statement);
  }
  return facts;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct DepthStat {
  std::int64_t sum = 0;
  std::int64_t count = 0;
};

/// Strict "a is shallower than b" on mean depth, compared without division.
bool Shallower(const DepthStat& a, const DepthStat& b) { return a.sum * b.count < b.sum * a.count; }

}  // namespace

const Chunk* ChunkModel::ChunkOf(const Formula& statement) const {
  for (const auto& c : chunks) {
    if (std::find(c.members.begin(), c.members.end(), statement) != c.members.end()) return &c;
  }
  return nullptr;
}

ChunkModel MineSubgoals(const std::string& problem_id, std::span<const proof::SolutionGraph> corpus,
                        const MiningConfig& config) {
  if (corpus.empty()) throw MiningError("empty corpus");
  if (corpus.size() < config.min_support_count) {
    throw MiningError("corpus has " + std::to_string(corpus.size()) + " solutions, fewer than the minimum " +
                      std::to_string(config.min_support_count));
  }
  if (!(config.tau > 0.0 && config.tau <= 1.0)) throw MiningError("tau must be in (0, 1]");

  const Formula conclusion = corpus.front().conclusion_node().statement;
  std::set<Formula> givens;
  for (const auto& n : corpus.front().nodes) {
    if (n.origin == proof::NodeOrigin::kGiven) givens.insert(n.statement);
  }

  const std::size_t total = corpus.size();
  std::map<Formula, std::size_t> support;
  std::map<Formula, DepthStat> depth;
  std::vector<SolutionFacts> facts;
  facts.reserve(total);
  for (const auto& g : corpus) {
    if (!(g.conclusion_node().statement == conclusion)) throw MiningError("corpus mixes different conclusions");
    std::set<Formula> g_givens;
    for (const auto& n : g.nodes) {
      if (n.origin == proof::NodeOrigin::kGiven) g_givens.insert(n.statement);
    }
    if (g_givens != givens) throw MiningError("corpus mixes different premises");
    facts.push_back(Collect(g, conclusion));
    for (const auto& s : facts.back().derived) {
      ++support[s];
      depth[s].sum += facts.back().depth.at(s);
      ++depth[s].count;
    }
  }

  ChunkModel model{problem_id, conclusion, total, config.tau, {}, {}, ReviewStatus::kPending, {}};

  std::vector<Formula> core;
  for (const auto& [s, count] : support) {
    if (AtLeast(count, total, config.tau)) core.push_back(s);
  }
  if (core.empty()) {
    model.chunks.push_back({1, {conclusion}, conclusion, 1.0});
    model.warnings.push_back("no statement reaches the support threshold; using the conclusion as the only subgoal");
    return model;
  }
  std::map<Formula, std::size_t> core_index;
  for (std::size_t i = 0; i < core.size(); ++i) core_index.emplace(core[i], i);

  // Per-solution relations between core statements, deduplicated within a
  // solution so each solution counts once.
  std::map<Pair, std::size_t> directed;
  std::map<Pair, std::size_t> undirected;
  for (const auto& f : facts) {
    std::set<Pair> rel;
    for (const auto& [child, parents] : f.parents) {
      if (!core_index.contains(child)) continue;
      for (const auto& p : parents) {
        if (core_index.contains(p)) {
          rel.emplace(p, child);
        } else if (f.derived.contains(p)) {
          for (const auto& q : f.parents.at(p)) {
            if (core_index.contains(q)) rel.emplace(q, child);
          }
        }
      }
    }
    std::set<Pair> unordered;
    for (const auto& [a, b] : rel) {
      if (a == b) continue;
      ++directed[{a, b}];
      unordered.insert(a < b ? Pair{a, b} : Pair{b, a});
    }
    for (const auto& p : unordered) ++undirected[p];
  }

  DisjointSets sets(core.size());
  std::vector<Pair> links;
  for (const auto& [pair, count] : undirected) {
    if (!AtLeast(count, total, config.tau)) continue;
    sets.Union(core_index.at(pair.first), core_index.at(pair.second));
    links.push_back(pair);
  }

  auto count_of = [&](const Formula& a, const Formula& b) {
    auto it = directed.find({a, b});
    return it == directed.end() ? std::size_t{0} : it->second;
  };
  // Majority direction; ties go from the shallower statement, then canonically.
  auto points_forward = [&](const Formula& a, const Formula& b) {
    const std::size_t ab = count_of(a, b);
    const std::size_t ba = count_of(b, a);
    if (ab != ba) return ab > ba;
    if (Shallower(depth.at(a), depth.at(b))) return true;
    if (Shallower(depth.at(b), depth.at(a))) return false;
    return a < b;
  };

  std::map<std::size_t, std::vector<Formula>> components;
  for (std::size_t i = 0; i < core.size(); ++i) components[sets.Find(i)].push_back(core[i]);

  struct Draft {
    std::vector<Formula> members;
    std::optional<Formula> subgoal;
  };
  std::vector<Draft> drafts;
  std::map<Formula, std::size_t> draft_of;
  for (auto& [root, members] : components) {
    for (const auto& m : members) draft_of.emplace(m, drafts.size());
    drafts.push_back({std::move(members), std::nullopt});
  }

  std::set<Formula> has_outgoing;
  for (const auto& [a, b] : links) has_outgoing.insert(points_forward(a, b) ? a : b);
  for (auto& d : drafts) {
    std::vector<Formula> sinks;
    for (const auto& m : d.members) {
      if (!has_outgoing.contains(m)) sinks.push_back(m);
    }
    if (sinks.size() == 1) {
      d.subgoal = sinks.front();
      continue;
    }
    const auto& pool = sinks.empty() ? d.members : sinks;
    Formula best = pool.front();
    for (const auto& m : pool) {
      if (Shallower(depth.at(best), depth.at(m))) best = m;
    }
    d.subgoal = best;
    model.warnings.push_back("chunk containing " + logic::FormatFormula(best) +
                             " has no unique sink; using its deepest member as the subgoal");
  }

  // Chunk dependency graph from cross-chunk relations in their majority direction.
  const std::size_t k = drafts.size();
  std::vector<std::set<std::size_t>> successors(k);
  std::vector<int> pending(k, 0);
  for (const auto& [pair, count] : directed) {
    const std::size_t ca = draft_of.at(pair.first);
    const std::size_t cb = draft_of.at(pair.second);
    if (ca == cb || count <= count_of(pair.second, pair.first)) continue;
    if (successors[ca].insert(cb).second) ++pending[cb];
  }
  auto before = [&](std::size_t a, std::size_t b) {
    const DepthStat& da = depth.at(*drafts[a].subgoal);
    const DepthStat& db = depth.at(*drafts[b].subgoal);
    if (Shallower(da, db)) return true;
    if (Shallower(db, da)) return false;
    return *drafts[a].subgoal < *drafts[b].subgoal;
  };
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < k; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end(), before);
    const std::size_t next = *it;
    ready.erase(it);
    order.push_back(next);
    for (std::size_t s : successors[next]) {
      if (--pending[s] == 0) ready.push_back(s);
    }
  }
  if (order.size() != k) {
    model.warnings.push_back("chunk dependencies are cyclic; ordering chunks by depth");
    order.resize(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), before);
  }

  for (std::size_t i = 0; i < k; ++i) {
    Draft& d = drafts[order[i]];
    std::size_t containing = 0;
    for (const auto& f : facts) {
      if (std::all_of(d.members.begin(), d.members.end(), [&](const Formula& m) { return f.derived.contains(m); })) {
        ++containing;
      }
    }
    model.chunks.push_back({static_cast<int>(i) + 1, d.members, *d.subgoal,
                            static_cast<double>(containing) / static_cast<double>(total)});
  }
  if (k == 1) model.warnings.push_back("no chunk structure found; returning a single chunk");
  return model;
}

void ValidateChunks(const ChunkModel& model) {
  if (model.chunks.empty()) throw MiningError("chunk model has no chunks");
  std::set<Formula> seen;
  for (std::size_t i = 0; i < model.chunks.size(); ++i) {
    const Chunk& c = model.chunks[i];
    if (c.index != static_cast<int>(i) + 1) throw MiningError("chunk indices must be 1..n in order");
    if (c.members.empty()) throw MiningError("chunk " + std::to_string(c.index) + " is empty");
    if (std::find(c.members.begin(), c.members.end(), c.subgoal) == c.members.end()) {
      throw MiningError("subgoal of chunk " + std::to_string(c.index) + " is not a member");
    }
    for (const auto& m : c.members) {
      if (!seen.insert(m).second) throw MiningError(logic::FormatFormula(m) + " belongs to two chunks");
      if (m == model.conclusion && (model.chunks.size() != 1 || c.members.size() != 1)) {
        throw MiningError("the conclusion can only form a chunk on its own");
      }
    }
  }
}

ChunkModel ApplyReview(ChunkModel model, const nlohmann::json& review) {
  const std::string decision = review.at("decision").get<std::string>();
  model.reviewer = review.value("reviewer", std::string());
  if (decision == "approve") {
    model.review = ReviewStatus::kApproved;
    return model;
  }
  if (decision != "override") throw MiningError("unknown review decision '" + decision + "'");
  std::vector<Chunk> chunks;
  for (const auto& c : review.at("chunks")) {
    std::vector<Formula> members;
    for (const auto& m : c.at("members")) members.push_back(logic::ParseFormula(m.get<std::string>()));
    std::sort(members.begin(), members.end());
    chunks.push_back({static_cast<int>(chunks.size()) + 1, std::move(members),
                      logic::ParseFormula(c.at("subgoal").get<std::string>()), c.value("support", 0.0)});
  }
  model.chunks = std::move(chunks);
  model.review = ReviewStatus::kOverridden;
  ValidateChunks(model);
  return model;
}

std::string_view ToString(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::kPending: return "pending";
    case ReviewStatus::kApproved: return "approved";
    case ReviewStatus::kOverridden: return "overridden";
  }
  return "?";
}

nlohmann::json ToJson(const ChunkModel& model) {
  nlohmann::json chunks = nlohmann::json::array();
  for (const auto& c : model.chunks) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : c.members) members.push_back(logic::FormatFormula(m));
    chunks.push_back({{"index", c.index},
                      {"members", std::move(members)},
                      {"subgoal", logic::FormatFormula(c.subgoal)},
                      {"support", c.support}});
  }
  nlohmann::json j = {{"version", 1},
                      {"problem", model.problem_id},
                      {"conclusion", logic::FormatFormula(model.conclusion)},
                      {"corpus_size", model.corpus_size},
                      {"tau", model.tau},
                      {"chunks", std::move(chunks)},
                      {"warnings", model.warnings},
                      {"review", ToString(model.review)}};
  if (!model.reviewer.empty()) j["reviewer"] = model.reviewer;
  return j;
}

ChunkModel ChunkModelFromJson(const nlohmann::json& j) {
  ChunkModel model{j.at("problem").get<std::string>(),
                   logic::ParseFormula(j.at("conclusion").get<std::string>()),
                   j.value("corpus_size", std::size_t{0}),
                   j.value("tau", 0.5),
                   {},
                   j.value("warnings", std::vector<std::string>{}),
                   ReviewStatus::kPending,
                   j.value("reviewer", std::string())};
  const std::string review = j.value("review", std::string("pending"));
  if (review == "approved") {
    model.review = ReviewStatus::kApproved;
  } else if (review == "overridden") {
    model.review = ReviewStatus::kOverridden;
  }
  for (const auto& c : j.at("chunks")) {
    std::vector<Formula> members;
    for (const auto& m : c.at("members")) members.push_back(logic::ParseFormula(m.get<std::string>()));
    model.chunks.push_back({c.at("index").get<int>(), std::move(members),
                            logic::ParseFormula(c.at("subgoal").get<std::string>()), c.value("support", 0.0)});
  }
  ValidateChunks(model);
  return model;
}

}  // namespace gpptutor::gpp
