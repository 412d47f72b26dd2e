#pragma once

// JSONL trace serialization. One header object, one object per (round, robot)
// event, one footer. Keys inside each line are alphabetical (nlohmann sorts),
// so identical runs serialize byte-identically.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dispersim/common.hpp"
#include "dispersim/engine.hpp"

namespace dispersim {

inline const char* act_name(Act a) {
  switch (a) {
    case Act::Stay: return "stay";
    case Act::Move: return "move";
    case Act::Settle: return "settle";
    case Act::Terminate: return "terminate";
  }
  return "?";
}

inline json event_to_json(const TraceEvent& e) {
  json j{{"act", act_name(e.kind)}, {"h", e.handle}, {"id", e.id},
         {"node", e.node},          {"port", e.port}, {"r", e.round},
         {"set", e.settled},        {"type", "ev"}};
  j["say"] = e.has_say ? json(hex64(e.say_hash)) : json();
  return j;
}

inline json final_to_json(const RobotFinal& f) {
  return json{{"byz", f.byzantine},   {"h", f.handle},
              {"id", f.id},           {"node", f.node},
              {"settled", f.settled}, {"terminated", f.terminated},
              {"type", "final"}};
}

// config must already be in normalized form (the scenario echo).
inline std::string trace_to_jsonl(const json& config, const RunResult& r) {
  std::ostringstream out;
  std::uint64_t h = fnv1a64(config.dump());
  out << json{{"config", config}, {"hash", hex64(h)}, {"type", "header"}, {"version", 1}}
          .dump()
      << "\n";
  for (const auto& e : r.events) out << event_to_json(e).dump() << "\n";
  json footer{{"cap_hit", r.cap_hit},
              {"extra", r.footer_extra},
              {"rounds", r.rounds},
              {"type", "footer"}};
  json finals = json::array();
  for (const auto& f : r.finals) finals.push_back(final_to_json(f));
  footer["finals"] = finals;
  out << footer.dump() << "\n";
  return out.str();
}

struct ParsedTrace {
  json header;
  std::vector<json> events;
  json footer;
  std::vector<TraceEvent> decoded;  // events decoded for the checker
  std::vector<RobotFinal> finals;
  Round rounds = 0;
  bool cap_hit = false;
};

inline Act act_from_name(const std::string& s) {
  if (s == "stay") return Act::Stay;
  if (s == "move") return Act::Move;
  if (s == "settle") return Act::Settle;
  if (s == "terminate") return Act::Terminate;
  throw ValidationError("unknown action in trace: " + s);
}

inline ParsedTrace parse_trace(const std::string& jsonl) {
  ParsedTrace t;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      t.header = j;
    } else if (type == "ev") {
      TraceEvent e;
      e.round = j.at("r").get<Round>();
      e.handle = j.at("h").get<Handle>();
      e.node = j.at("node").get<NodeId>();
      e.kind = act_from_name(j.at("act").get<std::string>());
      e.port = j.at("port").get<Port>();
      e.id = j.at("id").get<ClaimedId>();
      e.settled = j.at("set").get<bool>();
      e.has_say = !j.at("say").is_null();
      e.say_hash = e.has_say
                       ? std::stoull(j.at("say").get<std::string>(), nullptr, 16)
                       : 0;
      t.decoded.push_back(e);
      t.events.push_back(std::move(j));
    } else if (type == "footer") {
      t.footer = j;
      t.rounds = j.at("rounds").get<Round>();
      t.cap_hit = j.at("cap_hit").get<bool>();
      for (const auto& fj : j.at("finals")) {
        RobotFinal f;
        f.handle = fj.at("h").get<Handle>();
        f.id = fj.at("id").get<ClaimedId>();
        f.node = fj.at("node").get<NodeId>();
        f.settled = fj.at("settled").get<bool>();
        f.terminated = fj.at("terminated").get<bool>();
        f.byzantine = fj.at("byz").get<bool>();
        t.finals.push_back(f);
      }
    } else {
      throw ValidationError("unknown trace line type: " + type);
    }
  }
  if (t.header.is_null() || t.footer.is_null())
    throw ValidationError("trace missing header or footer");
  return t;
}

struct ReplayComparison {
  bool match = false;
  Round first_divergent_round = -1;
  std::string detail;
};

// Line-level comparison of two serialized traces of the same scenario.
inline ReplayComparison compare_traces(const std::string& archived,
                                       const std::string& fresh) {
  std::istringstream a(archived), b(fresh);
  std::string la, lb;
  while (true) {
    bool ga = static_cast<bool>(std::getline(a, la));
    bool gb = static_cast<bool>(std::getline(b, lb));
    if (!ga && !gb) return {true, -1, "match"};
    if (ga != gb || la != lb) {
      Round r = -1;
      const std::string& probe = ga ? la : lb;
      try {
        json j = json::parse(probe);
        if (j.contains("r")) r = j["r"].get<Round>();
      } catch (...) {
      }
      return {false, r, "divergence"};
    }
  }
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp);
    out << content;
  }
  std::rename(tmp.c_str(), path.c_str());
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dispersim
