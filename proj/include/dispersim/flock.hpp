#pragma once

// Shepherd-and-flock plumbing shared by every protocol that leads robots:
// the payload vocabulary, the follower reaction rule, and walk drivers for
// leading a flock along a known route or moving alone.
//
// Payload fields:
//   "mv":     port the emitter takes next round; followers covered by "call"
//             mirror it.
//   "call":   "all" or an array of claimed ids; addresses the move order.
//   "settle": array of claimed ids told to settle at the node where they
//             hear it.
//   "as":     soft-settled marker (capacity negotiations read it).
//   "xids":   extra ids a presence claims besides its shown one.
//
// Timing: a payload is attached to round t's action and heard at round t+1
// by whoever stands next to the emitter then. A leader therefore announces a
// route hop one round before taking it, and attaches a node's settle list to
// the move that enters that node.

#include <optional>
#include <set>
#include <vector>

#include "dispersim/engine.hpp"

namespace dispersim {

namespace payload {

inline json call_all() { return json("all"); }

inline json call_ids(const std::set<ClaimedId>& ids) {
  json a = json::array();
  for (ClaimedId id : ids) a.push_back(id);
  return a;
}

inline bool call_covers(const json& say, ClaimedId id) {
  if (!say.is_object() || !say.contains("call")) return false;
  const json& c = say["call"];
  if (c.is_string()) return c.get<std::string>() == "all";
  if (c.is_array()) {
    for (const auto& x : c)
      if (x.is_number_integer() && x.get<ClaimedId>() == id) return true;
  }
  return false;
}

inline std::optional<Port> move_order(const json& say) {
  if (say.is_object() && say.contains("mv") && say["mv"].is_number_integer())
    return say["mv"].get<Port>();
  return std::nullopt;
}

inline bool settle_listed(const json& say, ClaimedId id) {
  if (!say.is_object() || !say.contains("settle")) return false;
  for (const auto& x : say["settle"])
    if (x.is_number_integer() && x.get<ClaimedId>() == id) return true;
  return false;
}

inline bool soft_settled(const json& say) {
  return say.is_object() && say.contains("as");
}

inline json soft_marker() { return json{{"as", 1}}; }

}  // namespace payload

// The reaction of a flock member to its shepherd's shout, shared by every
// follower-flavored program. Settle instructions outrank move orders; a robot
// that settled terminates the following round.
class FollowerCore {
 public:
  // nullopt = no instruction applied; the caller decides what idle means.
  std::optional<Action> react(const LocalView& v) {
    if (settled_) return Action::terminate();
    const Presence* sh = v.shepherd_presence();
    if (!sh || sh->handle == v.self || sh->say.is_null()) return std::nullopt;
    ClaimedId me = v.self_presence().id;
    if (payload::settle_listed(sh->say, me)) {
      settled_ = true;
      return Action::settle();
    }
    if (payload::call_covers(sh->say, me)) {
      heard_call_ = true;
      if (auto mv = payload::move_order(sh->say)) return Action::move(*mv);
      return Action::stay();  // beacon without a move order: hold here
    }
    return std::nullopt;
  }
  bool ever_called() const { return heard_call_; }
  bool settled() const { return settled_; }

 private:
  bool settled_ = false;
  bool heard_call_ = false;
};

// Plain follower: waits in place until the shepherd instructs it.
class FlockFollower : public RobotProgram {
 public:
  Action step(const LocalView& v) override {
    if (auto a = core_.react(v)) return *a;
    return Action::stay();
  }

 private:
  FollowerCore core_;
};

// Leads co-located followers along a known port route: one announce round,
// then one hop per round, each payload describing the position about to be
// occupied (its exit port and optional extra fields such as a settle list).
class LeadWalk {
 public:
  LeadWalk() = default;
  LeadWalk(std::vector<Port> route, json call, std::vector<json> arrival_extra = {})
      : route_(std::move(route)), call_(std::move(call)) {
    extra_ = std::move(arrival_extra);
    extra_.resize(route_.size() + 1, json());
    // Suppress the move order on the final payload so the flock parks at the
    // destination instead of chasing a nonexistent next hop.
  }

  bool done() const { return announced_ && taken_ == route_.size(); }

  Action step() {
    if (!announced_) {
      announced_ = true;
      return Action::stay(payload_for(0));
    }
    Port p = route_[taken_];
    ++taken_;
    return Action::move(p, payload_for(taken_));
  }

 private:
  json payload_for(size_t pos) const {
    json j = extra_[pos].is_null() ? json::object() : extra_[pos];
    if (pos < route_.size()) {
      j["mv"] = route_[pos];
      j["call"] = call_;
    } else if (!j.empty()) {
      j["call"] = call_;  // settle lists still need addressing on arrival
    }
    return j.empty() ? json() : j;
  }

  std::vector<Port> route_;
  json call_;
  std::vector<json> extra_;
  bool announced_ = false;
  size_t taken_ = 0;
};

// Moves the emitter alone, silently; followers never react to it.
class SoloWalk {
 public:
  SoloWalk() = default;
  explicit SoloWalk(std::vector<Port> route) : route_(std::move(route)) {}
  bool done() const { return i_ == route_.size(); }
  Action step() { return Action::move(route_[i_++]); }

 private:
  std::vector<Port> route_;
  size_t i_ = 0;
};

}  // namespace dispersim
