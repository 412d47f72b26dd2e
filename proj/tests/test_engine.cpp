#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "dispersim/engine.hpp"
#include "dispersim/graph.hpp"
#include "dispersim/trace.hpp"

using namespace dispersim;

namespace {

struct Scripted : RobotProgram {
  std::function<Action(const LocalView&)> fn;
  explicit Scripted(std::function<Action(const LocalView&)> f) : fn(std::move(f)) {}
  Action step(const LocalView& v) override { return fn(v); }
};

EngineSetup basic_setup(const Graph& g, std::vector<NodeId> start) {
  EngineSetup s;
  s.g = &g;
  s.start = std::move(start);
  int k = static_cast<int>(s.start.size());
  for (Handle h = 0; h < k; ++h) s.ids.push_back(h + 1);
  s.byzantine.assign(k, 0);
  s.round_cap = 1000;
  return s;
}

}  // namespace

TEST_CASE("settle then terminate leaves robots where they began", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0, 1});
  for (Handle h = 0; h < 2; ++h)
    s.programs[h] = std::make_shared<Scripted>([](const LocalView& v) {
      return v.round == 0 ? Action::settle() : Action::terminate();
    });
  RunResult r = run_engine(s);
  REQUIRE(r.rounds == 2);
  REQUIRE_FALSE(r.cap_hit);
  for (const auto& f : r.finals) {
    REQUIRE(f.settled);
    REQUIRE(f.terminated);
  }
  REQUIRE(r.finals[0].node == 0);
  REQUIRE(r.finals[1].node == 1);
}

TEST_CASE("a lone walker on a two-node path alternates ends", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0});
  s.programs[0] = std::make_shared<Scripted>([](const LocalView& v) {
    return v.round < 5 ? Action::move(0) : Action::terminate();
  });
  RunResult r = run_engine(s);
  std::vector<NodeId> nodes;
  for (const auto& e : r.events) nodes.push_back(e.node);
  REQUIRE(nodes == std::vector<NodeId>{0, 1, 0, 1, 0, 1});
}

TEST_CASE("payloads travel with their emitter", "[engine]") {
  // Emitter at node 0 shouts while moving to node 1. The robot waiting at
  // node 0 must never hear it; the robot waiting at node 1 hears it in the
  // round after the move.
  Graph g = graphgen::path(2, {2, 2});
  EngineSetup s = basic_setup(g, {0, 0, 1});
  s.programs[0] = std::make_shared<Scripted>([](const LocalView& v) {
    if (v.round == 0) return Action::move(0, json{{"ping", 1}});
    return v.round < 3 ? Action::stay() : Action::terminate();
  });
  auto heard = std::make_shared<std::vector<std::pair<Handle, Round>>>();
  for (Handle h : {1, 2}) {
    s.programs[h] = std::make_shared<Scripted>([heard, h](const LocalView& v) {
      for (const auto& p : v.here)
        if (p.handle == 0 && !p.say.is_null() && p.say.contains("ping"))
          heard->push_back({h, v.round});
      return v.round < 3 ? Action::stay() : Action::terminate();
    });
  }
  run_engine(s);
  REQUIRE(*heard == std::vector<std::pair<Handle, Round>>{{2, 1}});
}

TEST_CASE("round zero views carry no payloads", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0, 0});
  auto sawSay = std::make_shared<bool>(false);
  for (Handle h = 0; h < 2; ++h)
    s.programs[h] = std::make_shared<Scripted>([sawSay](const LocalView& v) {
      if (v.round == 0)
        for (const auto& p : v.here)
          if (!p.say.is_null()) *sawSay = true;
      return v.round == 0 ? Action::stay(json{{"x", 1}}) : Action::terminate();
    });
  run_engine(s);
  REQUIRE_FALSE(*sawSay);
}

TEST_CASE("simultaneous moves cross on an edge", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0, 1});
  auto alone = std::make_shared<int>(0);
  for (Handle h = 0; h < 2; ++h)
    s.programs[h] = std::make_shared<Scripted>([alone](const LocalView& v) {
      if (v.round == 0) return Action::move(0);
      if (v.round == 1 && v.here.size() == 1) ++*alone;
      return Action::terminate();
    });
  RunResult r = run_engine(s);
  REQUIRE(*alone == 2);  // they swapped, passing each other mid-edge
  REQUIRE(r.finals[0].node == 1);
  REQUIRE(r.finals[1].node == 0);
}

TEST_CASE("terminated robots keep occupying their node", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0, 0});
  s.programs[0] = std::make_shared<Scripted>([](const LocalView& v) {
    return v.round == 0 ? Action::terminate() : Action::stay();
  });
  auto seen = std::make_shared<int>(-1);
  s.programs[1] = std::make_shared<Scripted>([seen](const LocalView& v) {
    if (v.round == 2) {
      *seen = static_cast<int>(v.here.size());
      return Action::terminate();
    }
    return Action::stay();
  });
  run_engine(s);
  REQUIRE(*seen == 2);
}

TEST_CASE("illegal actions are internal errors", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  {
    EngineSetup s = basic_setup(g, {0});
    s.programs[0] = std::make_shared<Scripted>(
        [](const LocalView&) { return Action::move(5); });
    REQUIRE_THROWS_AS(run_engine(s), InternalError);
  }
  {
    EngineSetup s = basic_setup(g, {0});
    s.programs[0] = std::make_shared<Scripted>([](const LocalView& v) {
      if (v.round == 0) return Action::settle();
      return Action::move(0);  // settled robots are pinned
    });
    REQUIRE_THROWS_AS(run_engine(s), InternalError);
  }
}

TEST_CASE("round cap reports non-termination without crashing", "[engine]") {
  Graph g = graphgen::path(2, {1, 1});
  EngineSetup s = basic_setup(g, {0});
  s.round_cap = 7;
  s.programs[0] =
      std::make_shared<Scripted>([](const LocalView&) { return Action::move(0); });
  RunResult r = run_engine(s);
  REQUIRE(r.cap_hit);
  REQUIRE(r.rounds == 7);
}

TEST_CASE("identical runs serialize to identical traces", "[engine]") {
  Graph g = graphgen::ring(4, {1, 1, 1, 1});
  auto mk = [&] {
    EngineSetup s = basic_setup(g, {0, 1, 2, 3});
    for (Handle h = 0; h < 4; ++h)
      s.programs[h] = std::make_shared<Scripted>([h](const LocalView& v) {
        if (v.round < h + 2) return Action::move(v.round % 2, json{{"h", h}});
        return v.round == h + 2 ? Action::settle() : Action::terminate();
      });
    return run_engine(s);
  };
  json cfg{{"name", "engine-determinism"}};
  std::string t1 = trace_to_jsonl(cfg, mk());
  std::string t2 = trace_to_jsonl(cfg, mk());
  REQUIRE(t1 == t2);
  REQUIRE(compare_traces(t1, t2).match);
}

TEST_CASE("trace text parses back to the same events", "[engine]") {
  Graph g = graphgen::path(3, {1, 1, 1});
  EngineSetup s = basic_setup(g, {0, 2});
  for (Handle h = 0; h < 2; ++h)
    s.programs[h] = std::make_shared<Scripted>([](const LocalView& v) {
      if (v.round == 0) return Action::move(0, json{{"note", "hop"}});
      return v.round == 1 ? Action::settle() : Action::terminate();
    });
  RunResult r = run_engine(s);
  std::string text = trace_to_jsonl(json{{"name", "parse"}}, r);
  ParsedTrace p = parse_trace(text);
  REQUIRE(p.decoded.size() == r.events.size());
  for (size_t i = 0; i < r.events.size(); ++i) {
    REQUIRE(p.decoded[i].round == r.events[i].round);
    REQUIRE(p.decoded[i].handle == r.events[i].handle);
    REQUIRE(p.decoded[i].node == r.events[i].node);
    REQUIRE(p.decoded[i].kind == r.events[i].kind);
    REQUIRE(p.decoded[i].say_hash == r.events[i].say_hash);
  }
  REQUIRE(p.rounds == r.rounds);
  REQUIRE(p.finals.size() == 2);

  // A single flipped action byte is caught at its round.
  std::string corrupted = text;
  size_t pos = corrupted.find("\"act\":\"settle\"");
  REQUIRE(pos != std::string::npos);
  corrupted.replace(pos, 14, "\"act\":\"stay\"  ");
  auto cmp = compare_traces(text, corrupted);
  REQUIRE_FALSE(cmp.match);
  REQUIRE(cmp.first_divergent_round == 1);
}
