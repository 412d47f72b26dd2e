#pragma once

// Independent reference implementations used as oracles. These deliberately
// avoid the library's walk/map code paths so a bug there cannot hide.

#include <optional>
#include <vector>

#include "dispersim/graph.hpp"

namespace oracle {

using dispersim::Graph;
using dispersim::NodeId;
using dispersim::Port;

// Position sequence v_0..v_L of a walk, recomputing the port rule from
// scratch: first move without an entry port exits via port 0, later moves
// exit via (entry + x) mod degree.
inline std::vector<NodeId> naive_walk(const Graph& g, NodeId start, Port entry,
                                      const std::vector<int>& steps) {
  std::vector<NodeId> pos{start};
  NodeId v = start;
  Port e = entry;
  for (int x : steps) {
    int deg = g.degree(v);
    if (deg == 0) {
      pos.push_back(v);
      continue;
    }
    Port p;
    if (e < 0) {
      p = 0;
    } else {
      p = static_cast<Port>((e + x) % deg);
    }
    auto [u, q] = g.link(v, p);
    v = u;
    e = q;
    pos.push_back(v);
  }
  return pos;
}

// Whether positions v_0..v_{L-1} (the start alone for an empty walk) visit
// every node of g.
inline bool prefix_covers(const Graph& g, NodeId start, Port entry,
                          const std::vector<int>& steps) {
  auto pos = naive_walk(g, start, entry, steps);
  std::vector<char> seen(g.n(), 0);
  size_t upto = steps.empty() ? 1 : steps.size();  // v_0..v_{L-1}
  for (size_t i = 0; i < upto; ++i) seen[pos[i]] = 1;
  for (char c : seen)
    if (!c) return false;
  return true;
}

// Port-preserving isomorphism test with a forced anchor: phi(rootA) = rootB
// determines the whole mapping because port labels must match exactly.
inline bool anchored_port_iso(const Graph& a, const Graph& b, NodeId rootA, NodeId rootB) {
  if (a.n() != b.n()) return false;
  std::vector<int> phi(a.n(), -1);
  std::vector<char> hit(b.n(), 0);
  phi[rootA] = rootB;
  hit[rootB] = 1;
  std::vector<NodeId> queue{rootA};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    NodeId u = queue[qi];
    NodeId w = phi[u];
    if (a.degree(u) != b.degree(w) || a.capacity(u) != b.capacity(w)) return false;
    for (Port p = 0; p < a.degree(u); ++p) {
      auto [ua, qa] = a.link(u, p);
      auto [wb, qb] = b.link(w, p);
      if (qa != qb) return false;
      if (phi[ua] == -1) {
        if (hit[wb]) return false;
        phi[ua] = wb;
        hit[wb] = 1;
        queue.push_back(ua);
      } else if (phi[ua] != wb) {
        return false;
      }
    }
  }
  for (int x : phi)
    if (x == -1) return false;
  return true;
}

// True if a is port-isomorphic (with capacities) to b under some anchor.
inline bool port_isomorphic(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  for (NodeId r = 0; r < b.n(); ++r)
    if (anchored_port_iso(a, b, 0, r)) return true;
  return false;
}

}  // namespace oracle
