#pragma once

// Anonymous port-labeled graphs with per-node capacities, plus the
// deterministic generators used by scenario files.
//
// Port maps are involutions: link(v, i) = (u, j) implies link(u, j) = (v, i).
// Graphs are simple (no self-loops, no parallel edges) and connected.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dispersim/common.hpp"

namespace dispersim {

struct Graph {
  struct Node {
    std::vector<std::pair<NodeId, Port>> link;  // port i -> (neighbor, reciprocal)
    int capacity = 0;
  };
  std::vector<Node> nodes;

  int n() const { return static_cast<int>(nodes.size()); }
  int degree(NodeId v) const { return static_cast<int>(nodes[v].link.size()); }
  int capacity(NodeId v) const { return nodes[v].capacity; }

  int m() const {
    int twice = 0;
    for (const auto& nd : nodes) twice += static_cast<int>(nd.link.size());
    return twice / 2;
  }

  std::pair<NodeId, Port> link(NodeId v, Port p) const { return nodes[v].link[p]; }
  NodeId neighbor(NodeId v, Port p) const { return nodes[v].link[p].first; }
  // Port at the far end; also the entry port a robot sees after crossing.
  Port reciprocal(NodeId v, Port p) const { return nodes[v].link[p].second; }

  long long total_capacity() const {
    long long t = 0;
    for (const auto& nd : nodes) t += nd.capacity;
    return t;
  }

  int nonzero_capacity_count() const {
    int c = 0;
    for (const auto& nd : nodes) c += nd.capacity > 0 ? 1 : 0;
    return c;
  }

  int max_degree() const {
    int d = 0;
    for (const auto& nd : nodes) d = std::max(d, static_cast<int>(nd.link.size()));
    return d;
  }

  bool connected() const {
    if (nodes.empty()) return false;
    std::vector<char> seen(nodes.size(), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (const auto& [u, _] : nodes[v].link) {
        if (!seen[u]) {
          seen[u] = 1;
          ++cnt;
          q.push(u);
        }
      }
    }
    return cnt == n();
  }

  // Hard structural validation; throws ValidationError on the first breach.
  void validate() const {
    if (nodes.empty()) throw ValidationError("graph has no nodes");
    for (NodeId v = 0; v < n(); ++v) {
      std::set<NodeId> nbrs;
      for (Port p = 0; p < degree(v); ++p) {
        auto [u, q] = link(v, p);
        if (u < 0 || u >= n()) throw ValidationError("port link out of range");
        if (u == v) throw ValidationError("self-loop at node " + std::to_string(v));
        if (!nbrs.insert(u).second)
          throw ValidationError("parallel edge at node " + std::to_string(v));
        if (q < 0 || q >= degree(u) || nodes[u].link[q] != std::make_pair(v, p))
          throw ValidationError("port map is not an involution at (" +
                                std::to_string(v) + "," + std::to_string(p) + ")");
      }
      if (nodes[v].capacity < 0) throw ValidationError("negative capacity");
    }
    if (!connected()) throw ValidationError("graph is disconnected");
  }

  json to_json() const {
    json caps = json::array();
    json adj = json::array();
    for (const auto& nd : nodes) {
      caps.push_back(nd.capacity);
      json row = json::array();
      for (const auto& [u, q] : nd.link) row.push_back(json::array({u, q}));
      adj.push_back(row);
    }
    return json{{"adj", adj}, {"capacities", caps}};
  }

  static Graph from_json(const json& j) {
    Graph g;
    const auto& adj = j.at("adj");
    const auto& caps = j.at("capacities");
    g.nodes.resize(adj.size());
    for (size_t v = 0; v < adj.size(); ++v) {
      g.nodes[v].capacity = caps.at(v).get<int>();
      for (const auto& pair : adj[v])
        g.nodes[v].link.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    return g;
  }

  // Canonical content hash (structure + capacities). Stable across runs.
  std::uint64_t hash() const { return fnv1a64(to_json().dump()); }
};

inline json summary(const Graph& g) {
  return json{{"m", g.m()},
              {"max_degree", g.max_degree()},
              {"n", g.n()},
              {"nonzero_capacity_count", g.nonzero_capacity_count()},
              {"total_capacity", g.total_capacity()}};
}

// Input condition for the rank-based dispersion protocol: total capacity must
// cover k - f true settlers plus one phantom unit per faulty robot at every
// capacity-bearing node it can poison.
inline bool capacity_condition_holds(const Graph& g, int k, int f) {
  if (f < 0 || f >= k) throw ValidationError("capacity condition requires 0 <= f < k");
  long long ctilde = g.nonzero_capacity_count();
  return g.total_capacity() >= ctilde * f + (k - f);
}

namespace graphgen {

// Edge-list builder. Edges are (u, v) pairs; ports are assigned per node in
// edge-insertion order, which keeps generator output deterministic.
inline Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                        std::vector<int> capacities) {
  if (n <= 0) throw ValidationError("graph needs at least one node");
  Graph g;
  g.nodes.resize(n);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loop rejected");
    Port pu = static_cast<Port>(g.nodes[u].link.size());
    Port pv = static_cast<Port>(g.nodes[v].link.size());
    g.nodes[u].link.emplace_back(v, pv);
    g.nodes[v].link.emplace_back(u, pu);
  }
  if (capacities.empty()) capacities.assign(n, 0);
  if (static_cast<int>(capacities.size()) != n)
    throw ValidationError("capacity list length != n");
  for (int v = 0; v < n; ++v) g.nodes[v].capacity = capacities[v];
  g.validate();
  return g;
}

// Explicit port-level builder: each entry is (u, pu, v, pv).
inline Graph from_port_edges(int n, const std::vector<std::array<int, 4>>& edges,
                             std::vector<int> capacities) {
  if (n <= 0) throw ValidationError("graph needs at least one node");
  Graph g;
  g.nodes.resize(n);
  // First pass: find each node's degree to size the port vectors.
  std::vector<int> deg(n, 0);
  for (const auto& e : edges) {
    deg[e[0]] = std::max(deg[e[0]], e[1] + 1);
    deg[e[2]] = std::max(deg[e[2]], e[3] + 1);
  }
  for (int v = 0; v < n; ++v) g.nodes[v].link.assign(deg[v], {-1, -1});
  for (const auto& e : edges) {
    auto [u, pu, v, pv] = std::tuple{e[0], e[1], e[2], e[3]};
    if (u < 0 || u >= n || v < 0 || v >= n) throw ValidationError("edge endpoint out of range");
    if (g.nodes[u].link[pu].first != -1 || g.nodes[v].link[pv].first != -1)
      throw ValidationError("port assigned twice");
    g.nodes[u].link[pu] = {v, pv};
    g.nodes[v].link[pv] = {u, pu};
  }
  for (int v = 0; v < n; ++v)
    for (Port p = 0; p < deg[v]; ++p)
      if (g.nodes[v].link[p].first == -1)
        throw ValidationError("port gap at node " + std::to_string(v));
  if (capacities.empty()) capacities.assign(n, 0);
  if (static_cast<int>(capacities.size()) != n)
    throw ValidationError("capacity list length != n");
  for (int v = 0; v < n; ++v) g.nodes[v].capacity = capacities[v];
  g.validate();
  return g;
}

inline Graph ring(int n, std::vector<int> capacities = {}) {
  if (n < 3) throw ValidationError("ring needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return from_edges(n, edges, std::move(capacities));
}

inline Graph path(int n, std::vector<int> capacities = {}) {
  if (n < 1) throw ValidationError("path needs n >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return from_edges(n, edges, std::move(capacities));
}

inline Graph star(int n, std::vector<int> capacities = {}) {
  if (n < 2) throw ValidationError("star needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
  return from_edges(n, edges, std::move(capacities));
}

// Random recursive tree: node i >= 1 attaches to a uniform earlier node.
inline Graph tree(int n, std::uint64_t seed, std::vector<int> capacities = {}) {
  if (n < 1) throw ValidationError("tree needs n >= 1");
  auto rng = seeded_rng(std::uint64_t(0x7265657eull), std::uint64_t(n), seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> d(0, v - 1);
    edges.emplace_back(d(rng), v);
  }
  return from_edges(n, edges, std::move(capacities));
}

// Connected random graph: random recursive tree plus extra distinct edges
// drawn until the target edge count is reached.
inline Graph random_connected(int n, int m, std::uint64_t seed,
                              std::vector<int> capacities = {}) {
  if (n < 1) throw ValidationError("random graph needs n >= 1");
  long long maxm = 1ll * n * (n - 1) / 2;
  if (m < n - 1 || m > maxm)
    throw ValidationError("random graph needs n-1 <= m <= n(n-1)/2");
  auto rng = seeded_rng(std::uint64_t(0x72616e64ull), std::uint64_t(n), std::uint64_t(m), seed);
  std::set<std::pair<int, int>> have;
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> d(0, v - 1);
    int u = d(rng);
    edges.emplace_back(u, v);
    have.insert({std::min(u, v), std::max(u, v)});
  }
  std::uniform_int_distribution<int> dn(0, n - 1);
  while (static_cast<int>(edges.size()) < m) {
    int u = dn(rng), v = dn(rng);
    if (u == v) continue;
    auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (have.count(key)) continue;
    have.insert(key);
    edges.emplace_back(u, v);
  }
  return from_edges(n, edges, std::move(capacities));
}

}  // namespace graphgen

}  // namespace dispersim
