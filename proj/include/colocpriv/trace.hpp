#pragma once

#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "colocpriv/engine.hpp"
#include "colocpriv/json_io.hpp"
#include "colocpriv/oracle.hpp"

namespace colocpriv {

struct TraceError : std::runtime_error {
  int line;
  TraceError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

inline json to_json(const oracle::Violation& v) {
  json j;
  switch (v.kind) {
    case oracle::Violation::Kind::DependentPair:
      j["kind"] = "dependent_pair";
      j["rid_a"] = v.rid_a;
      j["rid_b"] = v.rid_b;
      break;
    case oracle::Violation::Kind::InvalidDirect:
      j["kind"] = "invalid_direct";
      j["rid"] = v.rid_a;
      j["user"] = v.user;
      j["pid"] = v.pid;
      j["occurrence"] = to_json(v.occurrence);
      break;
    case oracle::Violation::Kind::InvalidIndirect:
      j["kind"] = "invalid_indirect";
      j["rid_a"] = v.rid_a;
      j["rid_b"] = v.rid_b;
      j["user"] = v.user;
      j["pid"] = v.pid;
      j["occurrence"] = to_json(v.occurrence);
      break;
    case oracle::Violation::Kind::SemanticColoc:
      j["kind"] = "semantic_coloc";
      j["user"] = v.user;
      j["excluded"] = v.excluded;
      j["pid"] = v.pid;
      j["t"] = v.t;
      j["max_feasible_distance"] = v.max_feasible_distance;
      break;
  }
  j["evidence"] = v.evidence;
  return j;
}

struct ReplayOptions {
  bool literal_eq13 = false;
  bool semantic = false;
  std::int64_t time_step = 60;
  double grid_res = 1.0;
};

/// Applies trace commands in seq order and collects the decision log.
/// `verify` commands run the adversary oracle over the current store.
class Replayer {
 public:
  Replayer(const Config& cfg, ReplayOptions opts = {})
      : cfg_(cfg), opts_(opts), store_(cfg.d_max) {}

  void apply(const json& cmd, int line) {
    const auto seq = cmd.at("seq").get<std::int64_t>();
    if (seq <= last_seq_) throw TraceError(line, "seq not increasing");
    last_seq_ = seq;
    const auto op = cmd.at("op").get<std::string>();
    if (op == "add_user") {
      social_.add_user(cmd.at("id").get<std::string>());
    } else if (op == "add_friend") {
      const auto a = cmd.at("a").get<std::string>();
      const auto b = cmd.at("b").get<std::string>();
      require_user(a, line);
      require_user(b, line);
      social_.add_friend(a, b);
    } else if (op == "add_pref") {
      const auto p = preference_from_json(cmd.at("pref"));
      require_user(p.owner, line);
      if (auto err = prefs_.add(p, cfg_)) {
        throw TraceError(line, std::string("preference rejected: ") +
                                   (*err == PreferenceError::WindowTooLong
                                        ? "WindowTooLong"
                                    : *err == PreferenceError::DistanceTooLarge
                                        ? "DistanceTooLarge"
                                        : "OwnerInExcluding"));
      }
    } else if (op == "publish") {
      const auto r = resource_from_json(cmd.at("resource"));
      require_user(r.owner, line);
      const auto d = publish(r, store_, prefs_, social_, cfg_,
                             opts_.literal_eq13);
      log_.push_back(to_json(r.rid, d).dump());
    } else if (op == "verify") {
      const auto resources = store_.all();
      const auto horizon = oracle::store_horizon(resources, cfg_);
      auto violations = oracle::check_conditions(resources, prefs_, cfg_,
                                                 horizon, opts_.literal_eq13);
      if (opts_.semantic) {
        auto sem = oracle::check_semantic_privacy(
            resources, prefs_, cfg_, horizon, opts_.time_step, opts_.grid_res);
        violations.insert(violations.end(), sem.begin(), sem.end());
      }
      if (!violations.empty()) violations_found_ = true;
      json arr = json::array();
      for (const auto& v : violations) arr.push_back(to_json(v));
      log_.push_back(json{{"verify", seq}, {"violations", arr}}.dump());
    } else {
      throw TraceError(line, "unknown op: " + op);
    }
  }

  /// Parses JSON lines; blank lines are skipped.
  void run(std::istream& in) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json cmd;
      try {
        cmd = json::parse(line);
        apply(cmd, line_no);
      } catch (const TraceError&) {
        throw;
      } catch (const std::exception& e) {
        throw TraceError(line_no, e.what());
      }
    }
  }

  const std::vector<std::string>& log() const { return log_; }
  bool violations_found() const { return violations_found_; }
  ResourceStore& store() { return store_; }
  const PreferenceStore& prefs() const { return prefs_; }
  const SocialGraph& social() const { return social_; }
  const Config& config() const { return cfg_; }

  /// Full replay output: decision log lines followed by the store dump.
  std::string output() const {
    std::string out;
    for (const auto& l : log_) {
      out += l;
      out += '\n';
    }
    out += json{{"final_store", store_to_json(store_)}}.dump();
    out += '\n';
    return out;
  }

 private:
  void require_user(const UserId& u, int line) const {
    if (!social_.has_user(u)) throw TraceError(line, "unknown user: " + u);
  }

  Config cfg_;
  ReplayOptions opts_;
  SocialGraph social_;
  PreferenceStore prefs_;
  ResourceStore store_;
  std::int64_t last_seq_ = -1;
  std::vector<std::string> log_;
  bool violations_found_ = false;
};

/// splitmix-style generator with explicit range helpers so that traces
/// are byte-identical across standard libraries.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::int64_t irange(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

struct GenerateParams {
  std::uint64_t seed = 1;
  int n_users = 20;
  int n_resources = 200;
  int n_prefs = 50;
  double area_km = 2.0;
  TimeStamp t0 = 1'700'000'000;
};

/// Reproducible synthetic trace: random-walk trajectories bounded by
/// v_max, random friendships, random preferences within the t_max and
/// d_max bounds, ending in a verify command.
inline std::string generate_trace(const GenerateParams& p, const Config& cfg) {
  DetRng rng(p.seed);
  std::ostringstream out;
  std::int64_t seq = 0;
  auto emit = [&](json j) {
    json line;
    line["seq"] = seq++;
    for (auto& [k, v] : j.items()) line[k] = v;
    out << line.dump() << '\n';
  };

  std::vector<UserId> users;
  for (int i = 0; i < p.n_users; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%03d", i);
    users.emplace_back(buf);
    emit(json{{"op", "add_user"}, {"id", users.back()}});
  }

  std::vector<std::vector<int>> friends(p.n_users);
  for (int i = 0; i < p.n_users; ++i) {
    const int want = static_cast<int>(2 + rng.below(3));
    for (int k = 0; k < want; ++k) {
      const int j = static_cast<int>(rng.below(p.n_users));
      if (j == i) continue;
      friends[i].push_back(j);
      friends[j].push_back(i);
      emit(json{{"op", "add_friend"}, {"a", users[i]}, {"b", users[j]}});
    }
  }

  const double area_m = p.area_km * 1000.0;
  const std::int64_t span =
      static_cast<std::int64_t>(p.n_resources) * 600 + 3600;

  for (int i = 0; i < p.n_prefs; ++i) {
    PrivacyPreference pref;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%03d", i);
    pref.pid = buf;
    pref.owner = users[rng.below(p.n_users)];
    const int n_excl = static_cast<int>(1 + rng.below(2));
    for (int k = 0; k < n_excl; ++k) {
      const auto& e = users[rng.below(p.n_users)];
      if (e != pref.owner) pref.excluding.insert(e);
    }
    if (pref.excluding.empty()) {
      pref.excluding.insert(pref.owner == users[0] ? users[1] : users[0]);
    }
    if (rng.unit() < 0.3) {
      const auto& a = users[rng.below(p.n_users)];
      if (a != pref.owner && !pref.excluding.count(a))
        pref.adversaries.insert(a);
    }
    const std::int64_t len = rng.irange(1800, 7200);
    const std::int64_t start = p.t0 + rng.irange(0, span);
    pref.window = {start, start + len};
    pref.distance = rng.range(20.0, cfg.d_max);
    const double roll = rng.unit();
    pref.recurrence = roll < 0.6   ? Recurrence::Once
                      : roll < 0.85 ? Recurrence::Daily
                      : roll < 0.95 ? Recurrence::Weekly
                                    : Recurrence::Yearly;
    emit(json{{"op", "add_pref"}, {"pref", to_json(pref)}});
  }

  struct Walker {
    Point pos;
    TimeStamp t;
  };
  std::vector<Walker> walk(p.n_users);
  for (int i = 0; i < p.n_users; ++i) {
    walk[i] = {{rng.range(0.0, area_m), rng.range(0.0, area_m)}, p.t0};
  }

  TimeStamp t = p.t0;
  for (int i = 0; i < p.n_resources; ++i) {
    t += rng.irange(60, 1200);
    const int who = static_cast<int>(rng.below(p.n_users));
    auto& w = walk[who];
    const double dt = static_cast<double>(t - w.t);
    const double step = rng.range(0.0, 0.8 * cfg.v_max * dt);
    const double ang = rng.range(0.0, 6.283185307179586);
    w.pos.x = std::clamp(w.pos.x + step * std::cos(ang), 0.0, area_m);
    w.pos.y = std::clamp(w.pos.y + step * std::sin(ang), 0.0, area_m);
    w.t = t;

    Resource r;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%04d", i);
    r.rid = buf;
    r.owner = users[who];
    r.users.insert(r.owner);
    if (!friends[who].empty() && rng.unit() < 0.5) {
      const int n_tag = static_cast<int>(1 + rng.below(2));
      for (int k = 0; k < n_tag; ++k)
        r.users.insert(users[friends[who][rng.below(friends[who].size())]]);
    }
    r.time = t;
    r.space = {w.pos, rng.range(0.0, 30.0)};
    r.content = "post " + r.rid;
    emit(json{{"op", "publish"}, {"resource", to_json(r)}});
  }

  emit(json{{"op", "verify"}});
  return out.str();
}

/// Runs two candidate publishes concurrently against `base` and checks
/// that the final store equals one of the two sequential orders,
/// bit-exact on the JSON dump. Returns the concurrent dump through `out`.
inline bool serializable_pair(const std::vector<Resource>& base,
                              const Resource& a, const Resource& b,
                              const PreferenceStore& prefs,
                              const SocialGraph& social, const Config& cfg,
                              std::string* out = nullptr,
                              std::vector<Resource>* final_resources = nullptr) {
  auto seed_store = [&](ResourceStore& s) {
    for (const auto& r : base) s.append_locked(r);
  };

  ResourceStore live(cfg.d_max);
  seed_store(live);
  std::thread ta([&] { publish(a, live, prefs, social, cfg); });
  std::thread tb([&] { publish(b, live, prefs, social, cfg); });
  ta.join();
  tb.join();
  const std::string got = store_to_json(live).dump();
  if (out) *out = got;
  if (final_resources) *final_resources = live.all();

  for (int order = 0; order < 2; ++order) {
    ResourceStore seq(cfg.d_max);
    seed_store(seq);
    publish(order == 0 ? a : b, seq, prefs, social, cfg);
    publish(order == 0 ? b : a, seq, prefs, social, cfg);
    if (store_to_json(seq).dump() == got) return true;
  }
  return false;
}

}  // namespace colocpriv
