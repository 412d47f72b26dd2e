#pragma once

// Map construction on an anonymous port-labeled graph.
//
// EmtExplorer: the shepherd escorts its flock through each unexplored port in
// turn, leaves it parked one hop out as a recognizable pebble, and walks the
// known region alone looking for it. Finding the pebble at a known node
// identifies the new endpoint with that node; failing everywhere proves the
// endpoint is new, and probing the remaining frontier edges from the inside
// pre-resolves any of them that also lead there. Recognition is a group-size
// threshold, optionally sharpened by a whitelist of ids that must make up the
// quorum.
//
// LabelDfsMapper: a solo depth-first traversal for the case where every node
// already holds soft-settled robots. A node is named by the lowest id among
// the marked robots parked there; at most one node can be bare (the mapper's
// own former seat) and borrows the mapper's id as its name.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "dispersim/flock.hpp"
#include "dispersim/known_map.hpp"

namespace dispersim {

class EmtExplorer {
 public:
  // threshold: minimum group size that counts as the pebble. whitelist, when
  // present, additionally requires that many presences showing listed ids,
  // and marks which ids belong to the flock when splitting residents out of
  // an observation. call addresses escort move orders.
  EmtExplorer(int threshold, std::optional<std::set<ClaimedId>> whitelist, json call)
      : threshold_(threshold), whitelist_(std::move(whitelist)), call_(std::move(call)) {}

  bool done() const { return phase_ == Phase::Done; }
  const KnownMap& map() const { return map_; }
  int map_position() const { return cur_; }
  // Non-flock robots seen at each node when first observed; only collected
  // when a whitelist separates flock from bystanders.
  const std::vector<std::vector<ClaimedId>>& residents() const { return residents_; }

  Action step(const LocalView& v) {
    switch (phase_) {
      case Phase::Boot: {
        cur_ = map_.add_node(v.degree, v.capacity);
        residents_.push_back(observe_residents(v));
        return next_frontier_or_done();
      }

      case Phase::Escort: {
        if (!escort_.done()) return escort_.step();
        // Standing at the frontier endpoint, flock parked around me. Record
        // what the endpoint looks like and slip back out the way I came.
        w_degree_ = v.degree;
        w_capacity_ = v.capacity;
        w_entry_ = v.entry;
        w_residents_ = observe_residents(v);
        stops_.clear();
        stops_.push_back(frontier_u_);
        for (int i = 0; i < map_.size(); ++i)
          if (i != frontier_u_) stops_.push_back(i);
        stop_idx_ = 0;
        phase_ = Phase::Sweep;
        leg_ = SoloWalk({w_entry_});
        return leg_.step();
      }

      case Phase::Sweep: {
        if (!leg_.done()) return leg_.step();
        // Arrived at stops_[stop_idx_]; is the flock here?
        if (recognized(v)) {
          match_ = stops_[stop_idx_];
          return begin_retrieve(stops_[stop_idx_]);
        }
        if (stop_idx_ + 1 < static_cast<int>(stops_.size())) {
          ++stop_idx_;
          leg_ = SoloWalk(map_.route(stops_[stop_idx_ - 1], stops_[stop_idx_]));
          return leg_.step();
        }
        // Checked every known node without finding it: the endpoint is new.
        match_ = -1;
        probes_.clear();
        for (auto [u, p] : map_.unexplored())
          if (!(u == frontier_u_ && p == frontier_p_)) probes_.push_back({u, p});
        if (probes_.empty()) return begin_retrieve(stops_.back());
        probe_at_ = stops_.back();
        phase_ = Phase::ProbeGo;
        leg_ = SoloWalk(map_.route(probe_at_, probes_.front().first));
        if (leg_.done()) {
          // Already standing at the probe's origin.
          phase_ = Phase::ProbeLook;
          probe_at_ = probes_.front().first;
          return Action::move(probes_.front().second);
        }
        return leg_.step();
      }

      case Phase::ProbeGo: {
        if (!leg_.done()) return leg_.step();
        phase_ = Phase::ProbeLook;
        probe_at_ = probes_.front().first;
        return Action::move(probes_.front().second);
      }

      case Phase::ProbeLook: {
        // One hop outside the known region. If the flock is here, this
        // frontier edge also ends at the new node; remember its entry port.
        if (recognized(v))
          pending_.push_back({probes_.front().first, probes_.front().second, v.entry});
        Port back = v.entry;
        probes_.pop_front();
        if (probes_.empty()) {
          phase_ = Phase::Retrieve;
          auto route = map_.route(probe_at_, frontier_u_);
          route.push_back(frontier_p_);
          leg_ = SoloWalk(std::move(route));
        } else {
          phase_ = Phase::ProbeGo;
          leg_ = SoloWalk(map_.route(probe_at_, probes_.front().first));
        }
        return Action::move(back);
      }

      case Phase::Retrieve: {
        if (!leg_.done()) return leg_.step();
        // Standing at the endpoint with the flock again: commit the record.
        commit();
        return next_frontier_or_done();
      }

      case Phase::Done:
        return Action::stay();
    }
    throw InternalError("explorer phase corrupted");
  }

 private:
  enum class Phase { Boot, Escort, Sweep, ProbeGo, ProbeLook, Retrieve, Done };

  std::vector<ClaimedId> observe_residents(const LocalView& v) const {
    std::vector<ClaimedId> out;
    if (!whitelist_) return out;
    for (const auto& p : v.here) {
      if (p.handle == v.self || p.shepherd) continue;
      if (!whitelist_->count(p.id)) out.push_back(p.id);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool recognized(const LocalView& v) const {
    int size = 0, listed = 0;
    for (const auto& p : v.here) {
      if (p.handle == v.self) continue;
      ++size;
      if (whitelist_ && whitelist_->count(p.id)) ++listed;
    }
    if (size < threshold_) return false;
    if (whitelist_ && listed < threshold_) return false;
    return true;
  }

  Action next_frontier_or_done() {
    auto fr = map_.first_unexplored();
    if (!fr) {
      phase_ = Phase::Done;
      return Action::stay();
    }
    frontier_u_ = fr->first;
    frontier_p_ = fr->second;
    auto route = map_.route(cur_, frontier_u_);
    route.push_back(frontier_p_);
    escort_ = LeadWalk(std::move(route), call_);
    phase_ = Phase::Escort;
    return escort_.step();
  }

  Action begin_retrieve(int from) {
    phase_ = Phase::Retrieve;
    auto route = map_.route(from, frontier_u_);
    route.push_back(frontier_p_);
    leg_ = SoloWalk(std::move(route));
    return leg_.step();
  }

  void commit() {
    if (match_ >= 0) {
      // The endpoint is known node match_. An honest run always finds both
      // port slots unclaimed; a fooled recognition may not, and then the
      // record is closed one-sided rather than overwriting good links.
      int x = match_;
      bool clean = w_entry_ < map_.node(x).degree && !map_.node(x).link[w_entry_] &&
                   !map_.node(frontier_u_).link[frontier_p_];
      if (clean) {
        map_.set_link(frontier_u_, frontier_p_, x, w_entry_);
      } else {
        Port q = w_entry_ < map_.node(x).degree ? w_entry_ : 0;
        map_.set_half_link(frontier_u_, frontier_p_, x, q);
      }
      cur_ = x;
    } else {
      int idx = map_.add_node(w_degree_, w_capacity_);
      residents_.push_back(w_residents_);
      map_.set_link(frontier_u_, frontier_p_, idx, w_entry_);
      for (auto& [pu, pp, pr] : pending_) {
        if (pr < w_degree_ && !map_.node(idx).link[pr] && !map_.node(pu).link[pp])
          map_.set_link(pu, pp, idx, pr);
      }
      cur_ = idx;
    }
    pending_.clear();
  }

  int threshold_;
  std::optional<std::set<ClaimedId>> whitelist_;
  json call_;

  KnownMap map_;
  std::vector<std::vector<ClaimedId>> residents_;
  Phase phase_ = Phase::Boot;
  int cur_ = 0;

  int frontier_u_ = -1;
  Port frontier_p_ = -1;
  LeadWalk escort_;
  SoloWalk leg_;
  std::vector<int> stops_;
  int stop_idx_ = 0;
  int match_ = -1;
  int w_degree_ = 0;
  int w_capacity_ = 0;
  Port w_entry_ = -1;
  std::vector<ClaimedId> w_residents_;
  std::deque<std::pair<int, Port>> probes_;
  int probe_at_ = -1;
  std::vector<std::tuple<int, Port, Port>> pending_;
};

// Solo mapper over a graph whose nodes all hold soft-settled robots. Depth
// first from the mapper's own seat, naming nodes by their lowest marked id.
// The seat itself may be bare (the mapper was its only settler); it borrows
// the mapper's id, which collides with nothing since ids are unique.
class LabelDfsMapper {
 public:
  bool done() const { return done_; }
  const KnownMap& map() const { return map_; }
  int map_position() const { return cur_; }

  Action step(const LocalView& v) {
    ++rounds_;
    long degree_sum = 0;
    for (const auto& nd : map_.nodes) degree_sum += nd.degree;
    if (rounds_ > 4 * degree_sum + 2 * map_.size() + 16)
      throw InternalError("label walk exceeded its round budget");

    if (!booted_) {
      booted_ = true;
      cur_ = map_.add_node(v.degree, v.capacity);
      names_[label_of(v)] = cur_;
      return advance();
    }
    if (moved_out_) {
      moved_out_ = false;
      ClaimedId l = label_of(v);
      auto it = names_.find(l);
      if (it != names_.end()) {
        // Known node: record the cross edge and step straight back.
        map_.set_link(cur_, out_port_, it->second, v.entry);
        return Action::move(v.entry);
      }
      int idx = map_.add_node(v.degree, v.capacity);
      names_[l] = idx;
      map_.set_link(cur_, out_port_, idx, v.entry);
      parent_port_[idx] = v.entry;
      cur_ = idx;
      return advance();
    }
    return advance();
  }

 private:
  ClaimedId label_of(const LocalView& v) const {
    std::optional<ClaimedId> best;
    for (const auto& p : v.here) {
      if (p.handle == v.self) continue;
      if (!payload::soft_settled(p.say)) continue;
      if (!best || p.id < *best) best = p.id;
    }
    return best ? *best : v.self_presence().id;
  }

  // Take the next unexplored port of cur_, or the recorded hop toward the
  // root when cur_ is exhausted.
  Action advance() {
    const auto& n = map_.node(cur_);
    for (Port q = 0; q < n.degree; ++q) {
      if (!n.link[q]) {
        out_port_ = q;
        moved_out_ = true;
        return Action::move(q);
      }
    }
    auto it = parent_port_.find(cur_);
    if (it == parent_port_.end()) {
      done_ = true;
      return Action::stay();
    }
    Port up = it->second;
    cur_ = map_.node(cur_).link[up]->first;
    return Action::move(up);
  }

  KnownMap map_;
  std::map<ClaimedId, int> names_;
  std::map<int, Port> parent_port_;
  int cur_ = 0;
  Port out_port_ = -1;
  bool booted_ = false;
  bool moved_out_ = false;
  bool done_ = false;
  long rounds_ = 0;
};

}  // namespace dispersim
