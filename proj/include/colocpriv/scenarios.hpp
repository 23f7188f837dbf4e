#pragma once

// Built-in scenario catalog: each scenario constructs its own users,
// preferences and resources, runs the engine, and asserts the expected
// decisions and oracle verdicts.

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "colocpriv/engine.hpp"
#include "colocpriv/oracle.hpp"
#include "colocpriv/trace.hpp"

namespace colocpriv::scenarios {

struct Result {
  bool pass = true;
  std::string detail;
};

namespace detail {

struct Check {
  Result r;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      r.pass = false;
      r.detail += (r.detail.empty() ? "" : "; ") + what;
    }
  }
};

inline Resource make_resource(const std::string& rid, const UserId& owner,
                              std::initializer_list<UserId> users, TimeStamp t,
                              Point center, double radius) {
  Resource r;
  r.rid = rid;
  r.owner = owner;
  r.users.insert(users.begin(), users.end());
  r.users.insert(owner);
  r.time = t;
  r.space = {center, radius};
  r.content = rid;
  return r;
}

inline bool oracle_clean(const ResourceStore& store,
                         const PreferenceStore& prefs, const Config& cfg) {
  const auto all = store.all();
  return oracle::check_conditions(all, prefs, cfg,
                                  oracle::store_horizon(all, cfg))
      .empty();
}

constexpr TimeStamp kT0 = 1'700'000'000;

}  // namespace detail

/// Two friends' posts co-locate a secret couple at the same address
/// moments apart; the second post must never go out verbatim.
inline Result alice_bob() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  for (auto u : {"alice", "bob", "charlie", "juliette"}) social.add_user(u);
  social.add_friend("charlie", "bob");
  social.add_friend("juliette", "alice");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_alice";
  phi.owner = "alice";
  phi.excluding = {"bob"};
  phi.window = {detail::kT0, detail::kT0 + 3600};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto r1 = detail::make_resource("r1", "charlie", {"bob"},
                                        detail::kT0 + 100, {0, 0}, 0);
  const auto r2 = detail::make_resource("r2", "juliette", {"alice"},
                                        detail::kT0 + 110, {0, 0}, 0);
  const auto d1 = publish(r1, store, prefs, social, cfg);
  c.expect(d1.published && d1.modifications.empty(),
           "first post should publish unchanged");
  const auto d2 = publish(r2, store, prefs, social, cfg);
  c.expect(d2.published, "second post should publish");
  c.expect(!d2.modifications.empty(), "second post must not go out verbatim");
  if (d2.published && !d2.modifications.empty()) {
    const bool enlarged = d2.resource.space.radius > 0.0;
    const bool erased = d2.resource.users.size() < r2.users.size();
    c.expect(enlarged || erased, "expected enlargement or user erasure");
    if (enlarged) {
      const double dmax = dmax_disks(d2.resource.space, r1.space);
      c.expect(std::fabs(dmax - phi.distance) <= 1e-9,
               "enlargement should land exactly on phi.D");
    }
  }
  c.expect(detail::oracle_clean(store, prefs, cfg), "oracle must be clean");
  return c.r;
}

/// Probe attack: Mary tags herself with Bob and Alice to fish for Bob's
/// settings. With Mary in the adversary set the post goes out untouched.
inline Result mary_probe_with_A() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  for (auto u : {"mary", "bob", "alice"}) social.add_user(u);
  social.add_friend("mary", "bob");
  social.add_friend("mary", "alice");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_bob";
  phi.owner = "bob";
  phi.excluding = {"alice"};
  phi.adversaries = {"mary"};
  phi.window = {detail::kT0, detail::kT0 + 3600};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto r = detail::make_resource("probe", "mary", {"bob", "alice"},
                                       detail::kT0 + 1800, {0, 0}, 0);
  const auto d = publish(r, store, prefs, social, cfg);
  c.expect(d.published, "probe should publish");
  c.expect(d.modifications.empty(),
           "adversary-set exemption should leave the probe untouched");
  return c.r;
}

/// Same probe without the adversary set: the engine's modification is the
/// very inference channel the adversary set closes.
inline Result mary_probe_without_A() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  for (auto u : {"mary", "bob", "alice"}) social.add_user(u);
  social.add_friend("mary", "bob");
  social.add_friend("mary", "alice");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_bob";
  phi.owner = "bob";
  phi.excluding = {"alice"};
  phi.window = {detail::kT0, detail::kT0 + 3600};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto r = detail::make_resource("probe", "mary", {"bob", "alice"},
                                       detail::kT0 + 1800, {0, 0}, 0);
  const auto d = publish(r, store, prefs, social, cfg);
  c.expect(d.published, "probe should still publish");
  c.expect(!d.modifications.empty(),
           "probe must be modified, revealing the inference channel");
  c.expect(!d.resource.tags("alice"), "excluded user should be erased");
  c.expect(detail::oracle_clean(store, prefs, cfg), "oracle must be clean");
  return c.r;
}

/// A user posts an exact location right after a coarse one: the pair is
/// dependent (the exact post narrows the coarse one). The engine repairs
/// it before commit.
inline Result fig4_dependence() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("u");
  PreferenceStore prefs;

  ResourceStore store(cfg.d_max);
  const auto r1 =
      detail::make_resource("ra", "u", {}, detail::kT0, {0, 0}, 100);
  const auto r2 =
      detail::make_resource("rb", "u", {}, detail::kT0 + 10, {0, 0}, 0);
  const auto d1 = publish(r1, store, prefs, social, cfg);
  c.expect(d1.published && d1.modifications.empty(), "coarse post unchanged");
  const auto d2 = publish(r2, store, prefs, social, cfg);
  c.expect(d2.published, "exact post should publish after repair");
  c.expect(!d2.modifications.empty(), "dependence must be repaired");
  if (d2.published) {
    c.expect(independent(d2.resource, r1, cfg.v_max, cfg.epsilon),
             "published pair must be independent");
  }
  c.expect(detail::oracle_clean(store, prefs, cfg), "oracle must be clean");

  // The unrepaired pair, stored directly, is what the oracle must catch.
  ResourceStore raw(cfg.d_max);
  raw.append_locked(r1);
  raw.append_locked(r2);
  const auto all = raw.all();
  const auto violations = oracle::check_conditions(
      all, prefs, cfg, oracle::store_horizon(all, cfg));
  c.expect(violations.size() == 1 &&
               violations[0].kind == oracle::Violation::Kind::DependentPair,
           "oracle should flag the raw pair as dependent");
  return c.r;
}

/// Direct co-location far enough from the protected window is valid and
/// publishes unchanged.
inline Result direct_valid() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("o");
  social.add_user("b");
  social.add_friend("o", "b");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_o";
  phi.owner = "o";
  phi.excluding = {"b"};
  phi.window = {detail::kT0 + 3600, detail::kT0 + 7200};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto r =
      detail::make_resource("r", "o", {"b"}, detail::kT0, {0, 0}, 0);
  const auto d = publish(r, store, prefs, social, cfg);
  c.expect(d.published && d.modifications.empty(),
           "valid direct co-location should pass untouched");
  c.expect(d.resource.tags("b"), "tag should survive");
  return c.r;
}

/// Direct co-location inside the protected window: the excluded user is
/// erased.
inline Result direct_invalid() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("o");
  social.add_user("b");
  social.add_friend("o", "b");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_o";
  phi.owner = "o";
  phi.excluding = {"b"};
  phi.window = {detail::kT0, detail::kT0 + 3600};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto r =
      detail::make_resource("r", "o", {"b"}, detail::kT0 + 100, {0, 0}, 0);
  const auto d = publish(r, store, prefs, social, cfg);
  c.expect(d.published, "post should publish after erasure");
  c.expect(!d.resource.tags("b"), "excluded user must be erased");
  c.expect(d.resource.tags("o"), "owner must survive");
  c.expect(detail::oracle_clean(store, prefs, cfg), "oracle must be clean");
  return c.r;
}

/// Indirect co-location far from the protected window is valid.
inline Result indirect_valid() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("o");
  social.add_user("e");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_o";
  phi.owner = "o";
  phi.excluding = {"e"};
  phi.window = {detail::kT0 + 1000, detail::kT0 + 2000};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto re = detail::make_resource("re", "e", {}, detail::kT0, {5, 0}, 0);
  const auto ro = detail::make_resource("ro", "o", {}, detail::kT0, {0, 0}, 0);
  publish(re, store, prefs, social, cfg);
  const auto d = publish(ro, store, prefs, social, cfg);
  c.expect(d.published && d.modifications.empty(),
           "valid indirect co-location should pass untouched");
  return c.r;
}

/// Indirect co-location one second before the window: invalid, repaired
/// by the minimal enlargement landing exactly on phi.D.
inline Result indirect_invalid() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("o");
  social.add_user("e");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_o";
  phi.owner = "o";
  phi.excluding = {"e"};
  phi.window = {detail::kT0 + 1, detail::kT0 + 1000};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  ResourceStore store(cfg.d_max);
  const auto re = detail::make_resource("re", "e", {}, detail::kT0, {5, 0}, 0);
  const auto ro = detail::make_resource("ro", "o", {}, detail::kT0, {0, 0}, 0);
  publish(re, store, prefs, social, cfg);
  const auto d = publish(ro, store, prefs, social, cfg);
  c.expect(d.published, "post should publish after enlargement");
  c.expect(!d.modifications.empty(), "post must be modified");
  if (d.published) {
    const double dmax = dmax_disks(d.resource.space, re.space);
    c.expect(std::fabs(dmax - phi.distance) <= 1e-9,
             "enlargement should land exactly on phi.D");
  }
  c.expect(detail::oracle_clean(store, prefs, cfg), "oracle must be clean");
  return c.r;
}

/// Neither enlargement (it would break independence with the owner's own
/// earlier post) nor erasure (it would drop the owner) can fix the
/// co-location: the post is denied.
inline Result owner_guard_denial() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("o");
  social.add_user("e");

  PreferenceStore prefs;
  ResourceStore store(cfg.d_max);
  const auto ra =
      detail::make_resource("ra", "o", {}, detail::kT0 + 1998, {0, 0}, 0);
  const auto re =
      detail::make_resource("re", "e", {}, detail::kT0 + 1999, {5, 0}, 0);
  publish(ra, store, prefs, social, cfg);
  publish(re, store, prefs, social, cfg);

  PrivacyPreference phi;  // registered after the posts above
  phi.pid = "phi_o";
  phi.owner = "o";
  phi.excluding = {"e"};
  phi.window = {detail::kT0 + 2000, detail::kT0 + 3000};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  const auto rc =
      detail::make_resource("rc", "o", {}, detail::kT0 + 1999, {0, 0}, 0);
  const auto d = publish(rc, store, prefs, social, cfg);
  c.expect(!d.published, "post must be denied");
  c.expect(d.denied_reason == DenyReason::PrivacyUnsatisfiable,
           "denial reason should be PrivacyUnsatisfiable");
  c.expect(store.size() == 2, "store must be unchanged");
  return c.r;
}

/// Two interfering publishes raced on two threads must land on one of
/// the two sequential orders, bit-exact on the store dump.
inline Result concurrent_publish() {
  detail::Check c;
  Config cfg;
  SocialGraph social;
  social.add_user("x");
  social.add_user("y");

  PreferenceStore prefs;
  PrivacyPreference phi;
  phi.pid = "phi_x";
  phi.owner = "x";
  phi.excluding = {"y"};
  phi.window = {detail::kT0, detail::kT0 + 3600};
  phi.distance = 50.0;
  prefs.add(phi, cfg);

  const auto a =
      detail::make_resource("ra", "x", {}, detail::kT0 + 100, {0, 0}, 0);
  const auto b =
      detail::make_resource("rb", "y", {}, detail::kT0 + 100, {10, 0}, 0);
  for (int i = 0; i < 10; ++i) {
    c.expect(serializable_pair({}, a, b, prefs, social, cfg),
             "round " + std::to_string(i) + " not serializable");
    if (!c.r.pass) break;
  }
  return c.r;
}

inline const std::map<std::string, std::function<Result()>>& catalog() {
  static const std::map<std::string, std::function<Result()>> k = {
      {"alice_bob", alice_bob},
      {"mary_probe_with_A", mary_probe_with_A},
      {"mary_probe_without_A", mary_probe_without_A},
      {"fig4_dependence", fig4_dependence},
      {"direct_valid", direct_valid},
      {"direct_invalid", direct_invalid},
      {"indirect_valid", indirect_valid},
      {"indirect_invalid", indirect_invalid},
      {"owner_guard_denial", owner_guard_denial},
      {"concurrent_publish", concurrent_publish},
  };
  return k;
}

}  // namespace colocpriv::scenarios
