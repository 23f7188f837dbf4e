#pragma once

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "colocpriv/engine.hpp"
#include "colocpriv/graph.hpp"
#include "colocpriv/model.hpp"

namespace colocpriv {

// Field order is fixed (ordered_json) so that dumps are byte-stable.
using json = nlohmann::ordered_json;

namespace b64 {

inline constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline std::string encode(const std::string& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= in.size(); i += 3) {
    unsigned v = (static_cast<unsigned char>(in[i]) << 16) |
                 (static_cast<unsigned char>(in[i + 1]) << 8) |
                 static_cast<unsigned char>(in[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rem = in.size() - i;
  if (rem == 1) {
    unsigned v = static_cast<unsigned char>(in[i]) << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rem == 2) {
    unsigned v = (static_cast<unsigned char>(in[i]) << 16) |
                 (static_cast<unsigned char>(in[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

inline int index_of(char c) {
  const char* p = std::strchr(kAlphabet, c);
  return (p && c != '\0') ? static_cast<int>(p - kAlphabet) : -1;
}

inline std::string decode(const std::string& in) {
  std::string out;
  unsigned buf = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=') break;
    const int v = index_of(c);
    if (v < 0) throw std::invalid_argument("bad base64 input");
    buf = (buf << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((buf >> bits) & 0xff);
    }
  }
  return out;
}

}  // namespace b64

inline json to_json(const Disk& d) {
  return json{{"cx", d.center.x}, {"cy", d.center.y}, {"radius", d.radius}};
}

inline Disk disk_from_json(const json& j) {
  return Disk{{j.at("cx").get<double>(), j.at("cy").get<double>()},
              j.at("radius").get<double>()};
}

inline json to_json(const TimeInterval& w) {
  return json{{"start", w.start}, {"end", w.end}};
}

inline TimeInterval interval_from_json(const json& j) {
  return TimeInterval{j.at("start").get<TimeStamp>(),
                      j.at("end").get<TimeStamp>()};
}

inline json to_json(const Resource& r) {
  return json{{"rid", r.rid},
              {"users", std::vector<UserId>(r.users.begin(), r.users.end())},
              {"owner", r.owner},
              {"time", r.time},
              {"space", to_json(r.space)},
              {"content_b64", b64::encode(r.content)}};
}

inline Resource resource_from_json(const json& j) {
  Resource r;
  r.rid = j.at("rid").get<std::string>();
  for (const auto& u : j.at("users")) r.users.insert(u.get<UserId>());
  r.owner = j.at("owner").get<UserId>();
  r.time = j.at("time").get<TimeStamp>();
  r.space = disk_from_json(j.at("space"));
  r.content = b64::decode(j.at("content_b64").get<std::string>());
  return r;
}

inline const char* to_string(Recurrence r) {
  switch (r) {
    case Recurrence::Once: return "once";
    case Recurrence::Daily: return "daily";
    case Recurrence::Weekly: return "weekly";
    case Recurrence::Yearly: return "yearly";
  }
  return "?";
}

inline Recurrence recurrence_from_string(const std::string& s) {
  if (s == "once") return Recurrence::Once;
  if (s == "daily") return Recurrence::Daily;
  if (s == "weekly") return Recurrence::Weekly;
  if (s == "yearly") return Recurrence::Yearly;
  throw std::invalid_argument("unknown recurrence: " + s);
}

inline json to_json(const PrivacyPreference& p) {
  return json{
      {"pid", p.pid},
      {"owner", p.owner},
      {"excluding", std::vector<UserId>(p.excluding.begin(), p.excluding.end())},
      {"adversaries",
       std::vector<UserId>(p.adversaries.begin(), p.adversaries.end())},
      {"window", to_json(p.window)},
      {"distance", p.distance},
      {"recurrence", to_string(p.recurrence)}};
}

inline PrivacyPreference preference_from_json(const json& j) {
  PrivacyPreference p;
  p.pid = j.at("pid").get<std::string>();
  p.owner = j.at("owner").get<UserId>();
  for (const auto& u : j.at("excluding")) p.excluding.insert(u.get<UserId>());
  for (const auto& u : j.at("adversaries"))
    p.adversaries.insert(u.get<UserId>());
  p.window = interval_from_json(j.at("window"));
  p.distance = j.at("distance").get<double>();
  p.recurrence = recurrence_from_string(j.at("recurrence").get<std::string>());
  return p;
}

inline json to_json(const Modification& m) {
  json j;
  switch (m.kind) {
    case Modification::Kind::UserErased:
      j["kind"] = "user_erased";
      j["users"] = std::vector<UserId>(m.users.begin(), m.users.end());
      break;
    case Modification::Kind::SpatialEnlarged:
      j["kind"] = "spatial_enlarged";
      j["old"] = to_json(m.old_space);
      j["new"] = to_json(m.new_space);
      j["cause_rid"] = m.cause_rid;
      break;
    case Modification::Kind::IndependenceEnlarged:
      j["kind"] = "independence_enlarged";
      j["old"] = to_json(m.old_space);
      j["new"] = to_json(m.new_space);
      break;
  }
  j["cause"] = m.cause;
  return j;
}

/// One decision-log line per publish attempt.
inline json to_json(const std::string& rid, const PublicationDecision& d) {
  json j;
  j["rid"] = rid;
  j["outcome"] = d.published ? "published" : "denied";
  json mods = json::array();
  for (const auto& m : d.modifications) mods.push_back(to_json(m));
  j["modifications"] = mods;
  j["retries"] = d.retries;
  if (d.denied_reason) j["denied_reason"] = to_string(*d.denied_reason);
  if (d.published) j["resource"] = to_json(d.resource);
  return j;
}

/// Store dump sorted by rid, for stable comparison across insert orders.
inline json store_to_json(const ResourceStore& store) {
  auto all = store.all();
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.rid < b.rid; });
  json arr = json::array();
  for (const auto& r : all) arr.push_back(to_json(r));
  return arr;
}

inline json to_json(const CoLocationGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back(json{{"rid", e.neighbor_rid}, {"d", e.weight}});
  return json{{"center", g.center_rid}, {"edges", edges}};
}

inline json config_to_json(const Config& c) {
  return json{{"v_max", c.v_max},
              {"t_max", c.t_max},
              {"d_max", c.d_max},
              {"epsilon", c.epsilon},
              {"max_retries", c.max_retries}};
}

inline Config config_from_json(const json& j) {
  Config c;
  if (j.contains("v_max")) c.v_max = j.at("v_max").get<double>();
  if (j.contains("t_max")) c.t_max = j.at("t_max").get<std::int64_t>();
  if (j.contains("d_max")) c.d_max = j.at("d_max").get<double>();
  if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
  if (j.contains("max_retries")) c.max_retries = j.at("max_retries").get<int>();
  return c;
}

}  // namespace colocpriv
