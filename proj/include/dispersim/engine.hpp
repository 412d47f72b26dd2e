#pragma once

// Synchronous round engine.
//
// Round t, for every robot still active:
//   1. communicate/compute: the robot sees its node (degree, capacity), its
//      entry port from the round t-1 move, and one presence per co-located
//      physical robot. A presence carries the claimed id, the unforgeable
//      shepherd flag, the declared settled flag, and the payload the robot
//      attached to its round t-1 action. Payloads travel with their emitter:
//      whoever stands next to the emitter at round t hears its last shout.
//   2. act: Stay, Move(port), Settle, or Terminate, plus an outgoing payload.
// All moves apply simultaneously after every robot has decided.
//
// Settle pins a robot to its node (it keeps being stepped and must Stay or
// Terminate). Terminate deactivates it; the body keeps occupying the node for
// final counting. Byzantine robots are driven by a controller instead of a
// program; the engine enforces only physics on them (incident moves, one
// presence, no shepherd flag) and records whatever they declare.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dispersim/common.hpp"
#include "dispersim/graph.hpp"

namespace dispersim {

struct Presence {
  Handle handle;
  ClaimedId id;
  bool shepherd;
  bool settled;
  json say;  // payload attached to this robot's previous action; null if none
};

struct LocalView {
  Round round;
  NodeId node;  // anonymous to the program; exposed for harness bookkeeping
  int degree;
  int capacity;
  Port entry;  // arrival port of this robot's most recent move, or kNoEntry
  Handle self;
  std::vector<Presence> here;  // ascending handle order, includes self

  const Presence& self_presence() const {
    for (const auto& p : here)
      if (p.handle == self) return p;
    throw InternalError("self presence missing from view");
  }
  const Presence* shepherd_presence() const {
    for (const auto& p : here)
      if (p.shepherd) return &p;
    return nullptr;
  }
};

enum class Act { Stay, Move, Settle, Terminate };

struct Action {
  Act kind = Act::Stay;
  Port port = 0;  // Move only
  json say;       // broadcast next round; null/empty means silence

  static Action stay(json s = json()) { return {Act::Stay, 0, std::move(s)}; }
  static Action move(Port p, json s = json()) { return {Act::Move, p, std::move(s)}; }
  static Action settle(json s = json()) { return {Act::Settle, 0, std::move(s)}; }
  static Action terminate() { return {Act::Terminate, 0, json()}; }
};

class RobotProgram {
 public:
  virtual ~RobotProgram() = default;
  virtual Action step(const LocalView& view) = 0;
  // Extra state reported in the trace footer (the mapper's map, for example).
  virtual json debug() const { return json(); }
};

// Ground-truth snapshot handed to Byzantine controllers. The adversary is
// deliberately stronger than any robot: it sees everything.
struct WorldView {
  const Graph* g;
  Round round;
  const std::vector<NodeId>* node_of;       // by handle
  const std::vector<ClaimedId>* honest_id;  // by handle (assigned ids)
  const std::vector<char>* settled;         // engine truth, by handle
  const std::vector<char>* active;          // by handle
  Handle shepherd;                          // -1 if none
};

// A Byzantine robot's per-round output. Settle/Terminate are allowed so a
// controller can shadow an honest program exactly; physics are identical.
struct ByzDecision {
  Act kind = Act::Stay;
  Port port = 0;
  ClaimedId claim = 1;   // presented next round (and at snapshot views)
  bool settled = false;  // declared flag presented next round
  json say;
};

class ByzantineController {
 public:
  virtual ~ByzantineController() = default;
  // Claim/settled flag shown in round-0 views, before any decision exists.
  virtual std::pair<ClaimedId, bool> initial_presentation(Handle h,
                                                          ClaimedId assigned_id) {
    return {assigned_id, false};
  }
  virtual ByzDecision step(Handle h, const LocalView& view, const WorldView& world) = 0;
};

struct TraceEvent {
  Round round;
  Handle handle;
  NodeId node;  // before this round's move
  Act kind;
  Port port;        // Move only, else -1
  ClaimedId id;     // id presented with this action
  bool settled;     // declared settled state after this action
  std::uint64_t say_hash;  // 0 when silent
  bool has_say;
};

struct RobotFinal {
  Handle handle;
  ClaimedId id;
  NodeId node;
  bool settled;     // engine truth for honest; declared for Byzantine
  bool terminated;
  bool byzantine;
};

struct RunResult {
  std::vector<TraceEvent> events;
  std::vector<RobotFinal> finals;
  Round rounds = 0;     // rounds executed
  bool cap_hit = false;
  json footer_extra;    // per-handle debug payloads (maps etc.)
};

struct EngineSetup {
  const Graph* g;
  std::vector<NodeId> start;       // by handle
  std::vector<ClaimedId> ids;      // by handle
  std::vector<char> byzantine;     // by handle
  Handle shepherd = -1;            // -1 when the protocol has none
  Round round_cap = 0;
  // Programs for honest handles; controller drives every Byzantine handle.
  std::map<Handle, std::shared_ptr<RobotProgram>> programs;
  std::shared_ptr<ByzantineController> controller;
};

inline RunResult run_engine(const EngineSetup& setup) {
  const Graph& g = *setup.g;
  const int k = static_cast<int>(setup.start.size());
  if (static_cast<int>(setup.ids.size()) != k ||
      static_cast<int>(setup.byzantine.size()) != k)
    throw InternalError("engine setup arrays disagree on k");

  std::vector<NodeId> node_of = setup.start;
  std::vector<Port> entry(k, kNoEntry);
  std::vector<char> settled(k, 0);
  std::vector<char> active(k, 1);
  std::vector<ClaimedId> shown_id(k);
  std::vector<char> shown_settled(k, 0);
  std::vector<json> say(k);  // heard this round (emitted last round)

  for (Handle h = 0; h < k; ++h) {
    shown_id[h] = setup.ids[h];
    if (setup.byzantine[h] && setup.controller) {
      auto [c, s] = setup.controller->initial_presentation(h, setup.ids[h]);
      shown_id[h] = std::max<ClaimedId>(1, c);
      shown_settled[h] = s;
    }
  }

  RunResult out;
  auto honest_done = [&] {
    for (Handle h = 0; h < k; ++h)
      if (!setup.byzantine[h] && active[h]) return false;
    return true;
  };

  Round t = 0;
  while (!honest_done()) {
    if (t >= setup.round_cap) {
      out.cap_hit = true;
      break;
    }
    // Build views.
    std::map<NodeId, std::vector<Handle>> at;
    for (Handle h = 0; h < k; ++h) at[node_of[h]].push_back(h);

    WorldView world{&g, t, &node_of, &setup.ids, &settled, &active, setup.shepherd};

    struct Staged {
      Handle h;
      Act kind;
      Port port;
      ClaimedId next_id;
      bool next_settled;
      json next_say;
    };
    std::vector<Staged> staged;

    for (Handle h = 0; h < k; ++h) {
      if (!active[h]) continue;
      NodeId v = node_of[h];
      LocalView view;
      view.round = t;
      view.node = v;
      view.degree = g.degree(v);
      view.capacity = g.capacity(v);
      view.entry = entry[h];
      view.self = h;
      for (Handle o : at[v])
        view.here.push_back(Presence{o, shown_id[o], o == setup.shepherd,
                                     shown_settled[o] != 0, say[o]});

      if (setup.byzantine[h]) {
        ByzDecision d = setup.controller->step(h, view, world);
        if (d.kind == Act::Move && (d.port < 0 || d.port >= view.degree))
          throw InternalError("controller emitted invalid port");
        staged.push_back({h, d.kind, d.kind == Act::Move ? d.port : -1,
                          std::max<ClaimedId>(1, d.claim), d.settled,
                          std::move(d.say)});
      } else {
        Action a = setup.programs.at(h)->step(view);
        if (a.kind == Act::Move && (a.port < 0 || a.port >= view.degree))
          throw InternalError("program emitted invalid port at node " +
                              std::to_string(v));
        if (settled[h] && a.kind == Act::Move)
          throw InternalError("settled robot attempted to move");
        if (a.kind == Act::Settle && settled[h])
          throw InternalError("robot settled twice");
        bool willSettle = a.kind == Act::Settle || settled[h];
        staged.push_back({h, a.kind, a.kind == Act::Move ? a.port : -1,
                          setup.ids[h], willSettle, std::move(a.say)});
      }
    }

    // Record, then apply simultaneously.
    for (const auto& s : staged) {
      std::uint64_t sh = 0;
      bool has = !s.next_say.is_null() &&
                 !(s.next_say.is_object() && s.next_say.empty());
      if (has) sh = fnv1a64(s.next_say.dump());
      out.events.push_back(TraceEvent{t, s.h, node_of[s.h], s.kind, s.port,
                                      s.next_id, s.next_settled, sh, has});
    }
    for (const auto& s : staged) {
      switch (s.kind) {
        case Act::Stay:
          break;
        case Act::Move: {
          auto [u, q] = g.link(node_of[s.h], s.port);
          node_of[s.h] = u;
          entry[s.h] = q;
          break;
        }
        case Act::Settle:
          settled[s.h] = 1;
          break;
        case Act::Terminate:
          active[s.h] = 0;
          break;
      }
      shown_id[s.h] = s.next_id;
      shown_settled[s.h] = s.next_settled;
      say[s.h] = s.kind == Act::Terminate ? json() : s.next_say;
    }
    ++t;
  }

  out.rounds = t;
  for (Handle h = 0; h < k; ++h) {
    bool isByz = setup.byzantine[h] != 0;
    out.finals.push_back(RobotFinal{h, setup.ids[h], node_of[h],
                                    isByz ? shown_settled[h] != 0 : settled[h] != 0,
                                    active[h] == 0, isByz});
  }
  json dbg = json::object();
  for (const auto& [h, prog] : setup.programs) {
    json d = prog->debug();
    if (!d.is_null() && !(d.is_object() && d.empty()))
      dbg[std::to_string(h)] = d;
  }
  out.footer_extra = dbg;
  return out;
}

}  // namespace dispersim
