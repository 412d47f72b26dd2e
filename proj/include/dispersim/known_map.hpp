#pragma once

// The map a mapping robot accumulates: nodes keyed by discovery index, each
// with degree, capacity, and per-port links that are either a known
// (node, reciprocal-port) pair or still unexplored. Also the deterministic
// settlement schedule computed over a completed map.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dispersim/common.hpp"
#include "dispersim/graph.hpp"

namespace dispersim {

struct KnownMap {
  struct Node {
    int degree = 0;
    int capacity = 0;
    std::vector<std::optional<std::pair<int, Port>>> link;  // by port
  };
  std::vector<Node> nodes;  // index 0 = root

  int size() const { return static_cast<int>(nodes.size()); }
  const Node& node(int u) const { return nodes[u]; }

  int add_node(int degree, int capacity) {
    Node nd;
    nd.degree = degree;
    nd.capacity = capacity;
    nd.link.assign(degree, std::nullopt);
    nodes.push_back(std::move(nd));
    return size() - 1;
  }

  void set_link(int u, Port pu, int v, Port pv) {
    nodes[u].link[pu] = {v, pv};
    nodes[v].link[pv] = {u, pu};
  }

  // Closes one side only. Used when a record is known to be inconsistent
  // (a fooled recognition) and overwriting the other endpoint would destroy
  // good data; the resulting map is wrong but every port ends up decided.
  void set_half_link(int u, Port pu, int v, Port pv) {
    nodes[u].link[pu] = {v, pv};
  }

  bool complete() const {
    for (const auto& nd : nodes)
      for (const auto& l : nd.link)
        if (!l) return false;
    return !nodes.empty();
  }

  // First unexplored (node, port) by discovery index then ascending port.
  std::optional<std::pair<int, Port>> first_unexplored() const {
    for (int u = 0; u < size(); ++u)
      for (Port p = 0; p < nodes[u].degree; ++p)
        if (!nodes[u].link[p]) return std::make_pair(u, p);
    return std::nullopt;
  }

  std::vector<std::pair<int, Port>> unexplored() const {
    std::vector<std::pair<int, Port>> out;
    for (int u = 0; u < size(); ++u)
      for (Port p = 0; p < nodes[u].degree; ++p)
        if (!nodes[u].link[p]) out.emplace_back(u, p);
    return out;
  }

  // Shortest port route between known nodes using known links only.
  std::vector<Port> route(int from, int to) const {
    if (from == to) return {};
    std::vector<int> prev(size(), -1);
    std::vector<Port> via(size(), -1);
    std::vector<int> queue{from};
    prev[from] = from;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (Port p = 0; p < nodes[u].degree; ++p) {
        if (!nodes[u].link[p]) continue;
        int v = nodes[u].link[p]->first;
        if (prev[v] != -1) continue;
        prev[v] = u;
        via[v] = p;
        if (v == to) {
          std::vector<Port> path;
          for (int x = to; x != from; x = prev[x]) path.push_back(via[x]);
          std::reverse(path.begin(), path.end());
          return path;
        }
        queue.push_back(v);
      }
    }
    throw InternalError("map route: target unreachable through known links");
  }

  // Spanning tree by DFS from the root, children in ascending port order.
  // parent_port[u] is the port at u leading back toward the root.
  struct Tree {
    std::vector<int> parent;       // -1 at root
    std::vector<Port> parent_port; // port at the child toward its parent
    std::vector<int> preorder;     // DFS visit order, root first
  };
  Tree spanning_tree() const {
    Tree t;
    t.parent.assign(size(), -2);
    t.parent_port.assign(size(), -1);
    t.parent[0] = -1;
    t.preorder.push_back(0);
    // Iterative DFS that expands each node's ports in ascending order.
    std::vector<Port> next(size(), 0);
    std::vector<int> path{0};
    while (!path.empty()) {
      int u = path.back();
      if (next[u] >= nodes[u].degree) {
        path.pop_back();
        continue;
      }
      Port p = next[u]++;
      if (!nodes[u].link[p]) throw InternalError("spanning_tree needs a complete map");
      auto [v, q] = *nodes[u].link[p];
      if (t.parent[v] != -2) continue;
      t.parent[v] = u;
      t.parent_port[v] = q;
      t.preorder.push_back(v);
      path.push_back(v);
    }
    return t;
  }

  // Closed walk from the root traversing every spanning-tree edge twice and
  // visiting all nodes; returns the port sequence.
  std::vector<Port> euler_tour() const {
    Tree t = spanning_tree();
    std::vector<Port> tour;
    std::function<void(int)> go = [&](int u) {
      for (Port p = 0; p < nodes[u].degree; ++p) {
        auto [v, q] = *nodes[u].link[p];
        if (t.parent[v] == u && t.parent_port[v] == q) {
          tour.push_back(p);
          go(v);
          tour.push_back(q);
        }
      }
    };
    go(0);
    return tour;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& nd : nodes) {
      json links = json::array();
      for (const auto& l : nd.link)
        links.push_back(l ? json::array({l->first, l->second}) : json());
      arr.push_back(json{{"capacity", nd.capacity}, {"degree", nd.degree}, {"links", links}});
    }
    return json{{"nodes", arr}};
  }

  static KnownMap from_json(const json& j) {
    KnownMap m;
    for (const auto& nj : j.at("nodes")) {
      int idx = m.add_node(nj.at("degree").get<int>(), nj.at("capacity").get<int>());
      const auto& links = nj.at("links");
      for (Port p = 0; p < m.nodes[idx].degree; ++p)
        if (!links.at(p).is_null())
          m.nodes[idx].link[p] = {links.at(p).at(0).get<int>(),
                                  links.at(p).at(1).get<int>()};
    }
    return m;
  }

  // View the completed map as a Graph so the generic checks apply to it.
  Graph as_graph() const {
    Graph g;
    g.nodes.resize(size());
    for (int u = 0; u < size(); ++u) {
      g.nodes[u].capacity = nodes[u].capacity;
      for (Port p = 0; p < nodes[u].degree; ++p) {
        if (!nodes[u].link[p]) throw InternalError("as_graph needs a complete map");
        g.nodes[u].link.emplace_back(nodes[u].link[p]->first, nodes[u].link[p]->second);
      }
    }
    return g;
  }
};

struct SettlementLedger {
  // Distinct claimed id -> map node index. Robots sharing a claimed id are
  // one unit: all of them are sent to the same node.
  std::map<ClaimedId, int> assignment;
  std::vector<int> allotted;  // per map node
  int shepherd_node = -1;     // -1 when shepherd_included was false

  std::vector<ClaimedId> ids_for(int node) const {
    std::vector<ClaimedId> out;
    for (const auto& [id, u] : assignment)
      if (u == node) out.push_back(id);
    return out;
  }
};

// Walks the map's spanning tree in preorder (children by ascending port) and
// hands each node the lowest unassigned claimed ids up to its capacity. The
// shepherd, when included, takes one unit at the first preorder node with
// residual capacity after all ids are placed.
inline SettlementLedger dfs_settlement_schedule(const KnownMap& map,
                                                const std::set<ClaimedId>& roster,
                                                bool shepherd_included) {
  long long need = static_cast<long long>(roster.size()) + (shepherd_included ? 1 : 0);
  long long have = 0;
  for (const auto& nd : map.nodes) have += nd.capacity;
  if (have < need)
    throw ValidationError("settlement schedule: total capacity " + std::to_string(have) +
                          " < required " + std::to_string(need));

  SettlementLedger ledger;
  ledger.allotted.assign(map.size(), 0);
  auto tree = map.spanning_tree();
  auto it = roster.begin();
  for (int u : tree.preorder) {
    while (it != roster.end() &&
           ledger.allotted[u] < map.nodes[u].capacity) {
      ledger.assignment[*it] = u;
      ++ledger.allotted[u];
      ++it;
    }
    if (it == roster.end()) break;
  }
  if (it != roster.end()) throw InternalError("settlement schedule ran out of capacity");
  if (shepherd_included) {
    for (int u : tree.preorder) {
      if (ledger.allotted[u] < map.nodes[u].capacity) {
        ledger.shepherd_node = u;
        ++ledger.allotted[u];
        break;
      }
    }
    if (ledger.shepherd_node < 0)
      throw InternalError("settlement schedule: no residual slot for the shepherd");
  }
  return ledger;
}

}  // namespace dispersim
