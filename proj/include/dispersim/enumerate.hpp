#pragma once

// Exhaustive enumeration of connected port-labeled simple graphs with at most
// max_n nodes, including every port labeling. Only practical for max_n <= 4
// or so; that is exactly the regime the exhaustive traversal checks need.

#include <array>
#include <functional>
#include <vector>

#include "dispersim/graph.hpp"

namespace dispersim {

namespace detail {

inline bool mask_connected(int n, const std::vector<std::pair<int, int>>& pairs,
                           unsigned mask) {
  std::vector<std::vector<int>> adj(n);
  for (size_t e = 0; e < pairs.size(); ++e)
    if (mask >> e & 1u) {
      adj[pairs[e].first].push_back(pairs[e].second);
      adj[pairs[e].second].push_back(pairs[e].first);
    }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++cnt;
        stack.push_back(u);
      }
  }
  return cnt == n;
}

}  // namespace detail

// Calls fn once per connected port-labeled graph with 1..max_n nodes.
// Deterministic order: by node count, then edge bitmask, then per-node port
// permutations advanced odometer-style. Capacities are all zero; callers that
// need capacities assign their own.
inline void for_each_connected_port_graph(int max_n,
                                          const std::function<void(const Graph&)>& fn) {
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    const unsigned maskEnd = 1u << pairs.size();
    for (unsigned mask = 0; mask < maskEnd; ++mask) {
      if (n > 1 && !detail::mask_connected(n, pairs, mask)) continue;
      if (n == 1 && mask != 0) continue;
      // Incident edge ids per node, in pair order.
      std::vector<std::vector<int>> inc(n);
      for (size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1u) {
          inc[pairs[e].first].push_back(static_cast<int>(e));
          inc[pairs[e].second].push_back(static_cast<int>(e));
        }
      // perm[v] maps port index -> incident edge id; advance as an odometer
      // of per-node permutations.
      std::vector<std::vector<int>> perm = inc;
      while (true) {
        Graph g;
        g.nodes.resize(n);
        for (int v = 0; v < n; ++v)
          g.nodes[v].link.assign(perm[v].size(), {-1, -1});
        for (int v = 0; v < n; ++v)
          for (Port p = 0; p < static_cast<int>(perm[v].size()); ++p) {
            int e = perm[v][p];
            int u = pairs[e].first == v ? pairs[e].second : pairs[e].first;
            // Reciprocal port: where edge e sits in u's permutation.
            for (Port q = 0; q < static_cast<int>(perm[u].size()); ++q)
              if (perm[u][q] == e) {
                g.nodes[v].link[p] = {u, q};
                break;
              }
          }
        fn(g);
        int v = 0;
        while (v < n && !std::next_permutation(perm[v].begin(), perm[v].end())) ++v;
        if (v == n) break;
      }
    }
  }
}

inline std::vector<Graph> all_connected_port_graphs(int max_n) {
  std::vector<Graph> out;
  for_each_connected_port_graph(max_n, [&](const Graph& g) { out.push_back(g); });
  return out;
}

}  // namespace dispersim
