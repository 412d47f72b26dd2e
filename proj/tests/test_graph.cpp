#include <catch2/catch_amalgamated.hpp>

#include "dispersim/enumerate.hpp"
#include "dispersim/graph.hpp"

using namespace dispersim;

TEST_CASE("two-node path is the smallest graph, ports 0<->0", "[graph]") {
  Graph g = graphgen::path(2, {1, 1});
  REQUIRE(g.n() == 2);
  REQUIRE(g.m() == 1);
  REQUIRE(g.degree(0) == 1);
  REQUIRE(g.degree(1) == 1);
  REQUIRE(g.link(0, 0) == std::make_pair(1, 0));
  REQUIRE(g.link(1, 0) == std::make_pair(0, 0));
}

TEST_CASE("ring nodes all have degree 2 and the port map is an involution", "[graph]") {
  Graph g = graphgen::ring(4);
  for (NodeId v = 0; v < 4; ++v) REQUIRE(g.degree(v) == 2);
  for (NodeId v = 0; v < g.n(); ++v)
    for (Port p = 0; p < g.degree(v); ++p) {
      auto [u, q] = g.link(v, p);
      REQUIRE(g.link(u, q) == std::make_pair(v, p));
    }
}

TEST_CASE("bad edge lists are rejected", "[graph]") {
  REQUIRE_THROWS_AS(graphgen::from_edges(3, {{0, 1}}, {}), ValidationError);  // disconnected
  REQUIRE_THROWS_AS(graphgen::from_edges(2, {{0, 0}}, {}), ValidationError);  // self-loop
  REQUIRE_THROWS_AS(graphgen::from_edges(2, {{0, 1}, {1, 0}}, {}), ValidationError);  // parallel
  REQUIRE_THROWS_AS(graphgen::path(2, {1, -1}), ValidationError);  // negative capacity
}

TEST_CASE("capacity condition arithmetic", "[graph]") {
  // caps [3,3,0], k=4, f=1: two capacity-bearing nodes, need 2*1 + 3 = 5 <= 6.
  Graph a = graphgen::path(3, {3, 3, 0});
  REQUIRE(capacity_condition_holds(a, 4, 1));
  // caps [1,1], k=4, f=1: need 2 + 3 = 5 > 2.
  Graph b = graphgen::path(2, {1, 1});
  REQUIRE_FALSE(capacity_condition_holds(b, 4, 1));
  // f=0 degenerates to total >= k.
  Graph c = graphgen::ring(4, {1, 1, 1, 1});
  REQUIRE(capacity_condition_holds(c, 4, 0));
  REQUIRE_FALSE(capacity_condition_holds(c, 5, 0));
  REQUIRE_THROWS_AS(capacity_condition_holds(c, 4, 4), ValidationError);
}

TEST_CASE("summary counts", "[graph]") {
  json s1 = summary(graphgen::path(2, {1, 1}));
  REQUIRE(s1["n"] == 2);
  REQUIRE(s1["m"] == 1);
  json s2 = summary(graphgen::ring(5, {1, 1, 1, 1, 1}));
  REQUIRE(s2["total_capacity"] == 5);
  REQUIRE(s2["nonzero_capacity_count"] == 5);
  json s3 = summary(graphgen::star(5, {4, 0, 0, 0, 0}));
  REQUIRE(s3["nonzero_capacity_count"] == 1);
  REQUIRE(s3["total_capacity"] == 4);
  REQUIRE(s3["max_degree"] == 4);
}

TEST_CASE("generators are pure functions of their spec", "[graph]") {
  Graph a = graphgen::random_connected(6, 9, 42);
  Graph b = graphgen::random_connected(6, 9, 42);
  REQUIRE(a.to_json() == b.to_json());
  REQUIRE(a.hash() == b.hash());
  Graph c = graphgen::random_connected(6, 9, 43);
  REQUIRE(a.to_json() != c.to_json());

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph t = graphgen::tree(7, seed);
    REQUIRE(t.m() == 6);
    REQUIRE(t.connected());
    Graph r = graphgen::random_connected(5, 8, seed);
    REQUIRE(r.m() == 8);
    REQUIRE(r.connected());
  }
}

TEST_CASE("json round trip preserves the graph", "[graph]") {
  Graph g = graphgen::random_connected(6, 8, 7, {2, 0, 1, 3, 0, 1});
  Graph h = Graph::from_json(g.to_json());
  h.validate();
  REQUIRE(g.to_json() == h.to_json());
}

TEST_CASE("port-labeled enumeration matches hand counts", "[graph]") {
  // Connected port-labeled graphs, counting every labeling:
  //   n=1: 1. n=2: 1.
  //   n=3: three 2-edge paths with 2 labelings each, one triangle with 2^3,
  //        so 14; running total 16.
  //   n=4: trees 72 (4 stars x 6, 12 paths x 4), 4-edge 336 (3 cycles x 16,
  //        12 triangle+pendant x 24), 5-edge 864 (6 masks x 144), K4 1296;
  //        total 2568; running total 2584.
  REQUIRE(all_connected_port_graphs(1).size() == 1);
  REQUIRE(all_connected_port_graphs(2).size() == 2);
  REQUIRE(all_connected_port_graphs(3).size() == 16);
  REQUIRE(all_connected_port_graphs(4).size() == 2584);

  int bad = 0;
  for_each_connected_port_graph(3, [&](const Graph& g) {
    try {
      g.validate();
    } catch (...) {
      ++bad;
    }
  });
  REQUIRE(bad == 0);
}
