#pragma once

// Exploration sequences and their coverage verification.
//
// A sequence for parameter P drives a walk: on the i-th move a robot that
// entered its node through port e leaves through (e + x_i) mod degree; the
// very first move of a traversal (no entry port yet) leaves through port 0.
//
// Coverage contract: from every start (node, entry) with entry in
// {none} U ports(node), the positions v_0..v_{L-1} visit every node (for the
// empty sequence the start node alone counts). Two verified modes exist:
// "exhaustive" checks every connected port-labeled graph with <= P nodes,
// "experiment-local" checks one concrete graph. "filler" sequences are
// unverified spacers used only to keep doubling schedules aligned.

#include <bit>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dispersim/common.hpp"
#include "dispersim/enumerate.hpp"
#include "dispersim/graph.hpp"

namespace dispersim {

inline Port next_port(Port entry, long long step_value, int degree) {
  if (degree < 1) throw InternalError("next_port on degree-0 node");
  if (entry == kNoEntry) return 0;
  if (entry < 0 || entry >= degree) throw InternalError("entry port out of range");
  Port p = static_cast<Port>((entry + step_value) % degree);
  if (p < 0 || p >= degree) throw InternalError("computed port out of range");
  return p;
}

struct UxsSequence {
  int param = 0;
  std::vector<int> steps;  // x_1..x_L, each in [0, param]
  std::string mode;        // "exhaustive" | "experiment-local" | "filler"
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;  // 0 in exhaustive mode
  std::uint64_t report_hash = 0;

  int length() const { return static_cast<int>(steps.size()); }

  json to_json() const {
    return json{{"graph_hash", hex64(graph_hash)}, {"mode", mode},
                {"param", param},                  {"report_hash", hex64(report_hash)},
                {"seed", seed},                    {"steps", steps}};
  }
  static UxsSequence from_json(const json& j) {
    UxsSequence s;
    s.param = j.at("param").get<int>();
    s.steps = j.at("steps").get<std::vector<int>>();
    s.mode = j.at("mode").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.graph_hash = std::stoull(j.at("graph_hash").get<std::string>(), nullptr, 16);
    s.report_hash = std::stoull(j.at("report_hash").get<std::string>(), nullptr, 16);
    return s;
  }
};

// One walker's position along a sequence. Degree-0 nodes (the 1-node graph)
// make every step a no-op.
struct WalkState {
  NodeId pos;
  Port entry;
  void step(const Graph& g, int x) {
    int deg = g.degree(pos);
    if (deg == 0) return;
    Port p = next_port(entry, x, deg);
    auto [u, q] = g.link(pos, p);
    pos = u;
    entry = q;
  }
};

struct CoverageFailure {
  int graph_index;
  NodeId start;
  Port entry;  // kNoEntry for the fresh start
  int visited_count;
};

struct CoverageReport {
  bool ok = false;
  long long graphs = 0;
  long long starts = 0;
  std::vector<CoverageFailure> failures;  // capped at 32 entries

  json to_json() const {
    json fails = json::array();
    for (const auto& f : failures)
      fails.push_back(json{{"entry", f.entry},
                           {"graph_index", f.graph_index},
                           {"start", f.start},
                           {"visited_count", f.visited_count}});
    return json{{"failures", fails}, {"graphs", graphs}, {"ok", ok}, {"starts", starts}};
  }
  std::uint64_t hash() const { return fnv1a64(to_json().dump()); }
};

// Checks the prefix-coverage contract of `seq` against every given graph.
inline CoverageReport verify_coverage(const UxsSequence& seq,
                                      const std::vector<Graph>& graphs) {
  CoverageReport rep;
  rep.graphs = static_cast<long long>(graphs.size());
  const int L = seq.length();
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
    const Graph& g = graphs[gi];
    for (NodeId v = 0; v < g.n(); ++v) {
      for (Port e = kNoEntry; e < g.degree(v); ++e) {
        ++rep.starts;
        WalkState w{v, e};
        std::vector<char> seen(g.n(), 0);
        seen[v] = 1;
        int cnt = 1;
        // Positions v_1..v_{L-1}; v_0 is the start itself.
        for (int i = 1; i <= L - 1 && cnt < g.n(); ++i) {
          w.step(g, seq.steps[i - 1]);
          if (!seen[w.pos]) {
            seen[w.pos] = 1;
            ++cnt;
          }
        }
        if (cnt != g.n() && rep.failures.size() < 32)
          rep.failures.push_back({gi, v, e, cnt});
      }
    }
  }
  rep.ok = rep.failures.empty();
  return rep;
}

inline constexpr int kExhaustiveCeiling = 4;

// Draws seeded steps and extends until the coverage contract holds, then
// appends one final element so the covering prefix v_0..v_{L-1} uses only
// x_1..x_{L-1} and the full sequence still has a move for every round.
inline UxsSequence generate_uxs(int param, const Graph* g, std::uint64_t seed) {
  if (param < 1) throw ValidationError("sequence parameter must be >= 1");
  if (g == nullptr && param > kExhaustiveCeiling)
    throw ValidationError("exhaustive sequences only available for parameter <= " +
                          std::to_string(kExhaustiveCeiling));

  UxsSequence seq;
  seq.param = param;
  seq.seed = seed;
  seq.mode = g ? "experiment-local" : "exhaustive";
  seq.graph_hash = g ? g->hash() : 0;

  std::vector<Graph> graphs =
      g ? std::vector<Graph>{*g} : all_connected_port_graphs(param);

  struct St {
    const Graph* g;
    WalkState w;
    std::uint32_t covered;
    int need;
  };
  std::vector<St> states;
  for (const auto& gr : graphs)
    for (NodeId v = 0; v < gr.n(); ++v)
      for (Port e = kNoEntry; e < gr.degree(v); ++e)
        states.push_back({&gr, WalkState{v, e}, 1u << v, gr.n()});

  auto all_done = [&] {
    for (const auto& s : states)
      if (std::popcount(s.covered) != s.need) return false;
    return true;
  };

  auto rng = seeded_rng(std::uint64_t(0x75787321ull), std::uint64_t(param),
                        seq.graph_hash, seed);
  std::uniform_int_distribution<int> draw(0, param);

  if (!all_done()) {
    const long long budget = 64ll * param * param * param * param * param;
    bool complete = false;
    while (!complete) {
      if (static_cast<long long>(seq.steps.size()) >= budget)
        throw InternalError("sequence search budget exhausted for parameter " +
                            std::to_string(param));
      int x = draw(rng);
      seq.steps.push_back(x);
      complete = true;
      for (auto& s : states) {
        s.w.step(*s.g, x);
        s.covered |= 1u << s.w.pos;
        if (std::popcount(s.covered) != s.need) complete = false;
      }
    }
    seq.steps.push_back(draw(rng));  // the L-th move, past the covering prefix
  }

  CoverageReport rep = verify_coverage(seq, graphs);
  if (!rep.ok) throw InternalError("accepted sequence failed re-verification");
  seq.report_hash = rep.hash();
  return seq;
}

// Unverified spacer sequence of length param^2 (schedules only).
inline UxsSequence filler_uxs(int param, std::uint64_t seed) {
  UxsSequence seq;
  seq.param = param;
  seq.seed = seed;
  seq.mode = "filler";
  auto rng = seeded_rng(std::uint64_t(0x66696c6cull), std::uint64_t(param), seed);
  std::uniform_int_distribution<int> draw(0, param);
  long long len = 1ll * param * param;
  for (long long i = 0; i < len; ++i) seq.steps.push_back(draw(rng));
  seq.report_hash = 0;
  return seq;
}

// Process-wide memo: exhaustive sequences are expensive to regenerate and
// identical across runs with the same (param, graph, seed).
inline const UxsSequence& cached_uxs(int param, const Graph* g, std::uint64_t seed,
                                     bool filler = false) {
  static std::mutex mu;
  static std::map<std::tuple<int, std::uint64_t, std::uint64_t, bool>, UxsSequence> memo;
  std::uint64_t gh = g ? g->hash() : 0;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(param, gh, seed, filler);
  auto it = memo.find(key);
  if (it == memo.end()) {
    UxsSequence s = filler ? filler_uxs(param, seed) : generate_uxs(param, g, seed);
    it = memo.emplace(key, std::move(s)).first;
  }
  return it->second;
}

// Per-run source of sequences for protocol code. The graph reference is a
// harness-level substitution: robots only ever receive the sequence itself,
// never the graph.
class UxsProvider {
 public:
  UxsProvider(const Graph& g, std::uint64_t seed) : g_(&g), seed_(seed) {}

  const UxsSequence& seq_for(int param) const {
    if (param <= kExhaustiveCeiling) return cached_uxs(param, nullptr, seed_);
    if (param >= g_->n()) return cached_uxs(param, g_, seed_);
    return cached_uxs(param, nullptr, seed_, /*filler=*/true);
  }
  int X(int param) const { return seq_for(param).length(); }

 private:
  const Graph* g_;
  std::uint64_t seed_;
};

}  // namespace dispersim
