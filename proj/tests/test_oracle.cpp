#include <doctest.h>

#include <algorithm>
#include <random>

#include "colocpriv/oracle.hpp"

using namespace colocpriv;

namespace {

Resource res(const std::string& rid, const UserId& owner,
             std::initializer_list<UserId> others, TimeStamp t, Point c,
             double r) {
  Resource out;
  out.rid = rid;
  out.owner = owner;
  out.users.insert(owner);
  out.users.insert(others.begin(), others.end());
  out.time = t;
  out.space = {c, r};
  return out;
}

PrivacyPreference pref(const std::string& pid, const UserId& owner,
                       std::initializer_list<UserId> e,
                       std::initializer_list<UserId> a, TimeInterval w,
                       double d) {
  PrivacyPreference p;
  p.pid = pid;
  p.owner = owner;
  p.excluding.insert(e.begin(), e.end());
  p.adversaries.insert(a.begin(), a.end());
  p.window = w;
  p.distance = d;
  return p;
}

constexpr TimeStamp kT0 = 1'700'000'000;

}  // namespace

TEST_CASE("check_conditions on an empty store") {
  Config cfg;
  PreferenceStore prefs;
  CHECK(oracle::check_conditions({}, prefs, cfg, {0, 1}).empty());
}

TEST_CASE("check_conditions flags a dependent pair") {
  Config cfg;
  PreferenceStore prefs;
  const std::vector<Resource> store = {
      res("ra", "u", {}, kT0, {0, 0}, 100),
      res("rb", "u", {}, kT0 + 10, {0, 0}, 0),
  };
  const auto v = oracle::check_conditions(store, prefs, cfg,
                                          oracle::store_horizon(store, cfg));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == oracle::Violation::Kind::DependentPair);
  CHECK(v[0].rid_a == "ra");
  CHECK(v[0].rid_b == "rb");
}

TEST_CASE("check_conditions flags invalid direct and indirect co-locations") {
  Config cfg;
  PreferenceStore prefs;
  prefs.add(pref("p", "o", {"e"}, {}, {kT0, kT0 + 3600}, 50), cfg);

  SUBCASE("direct, inside the window") {
    const std::vector<Resource> store = {
        res("r", "o", {"e"}, kT0 + 100, {0, 0}, 0)};
    const auto v = oracle::check_conditions(store, prefs, cfg,
                                            oracle::store_horizon(store, cfg));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == oracle::Violation::Kind::InvalidDirect);
    CHECK(v[0].pid == "p");
  }
  SUBCASE("indirect, pair straddling the window") {
    const std::vector<Resource> store = {
        res("r1", "o", {}, kT0 + 100, {0, 0}, 0),
        res("r2", "e", {}, kT0 + 110, {5, 0}, 0)};
    const auto v = oracle::check_conditions(store, prefs, cfg,
                                            oracle::store_horizon(store, cfg));
    REQUIRE(!v.empty());
    CHECK(v[0].kind == oracle::Violation::Kind::InvalidIndirect);
  }
  SUBCASE("adversary tag exempts both") {
    prefs = PreferenceStore{};
    prefs.add(pref("p", "o", {"e"}, {"m"}, {kT0, kT0 + 3600}, 50), cfg);
    const std::vector<Resource> store = {
        res("r", "o", {"e", "m"}, kT0 + 100, {0, 0}, 0)};
    CHECK(oracle::check_conditions(store, prefs, cfg,
                                   oracle::store_horizon(store, cfg))
              .empty());
  }
}

TEST_CASE("check_conditions is insensitive to store order") {
  Config cfg;
  PreferenceStore prefs;
  prefs.add(pref("p", "o", {"e"}, {}, {kT0, kT0 + 3600}, 50), cfg);
  std::vector<Resource> store = {
      res("r1", "o", {}, kT0 + 100, {0, 0}, 0),
      res("r2", "e", {}, kT0 + 110, {5, 0}, 0),
      res("r3", "o", {}, kT0 + 100, {800, 0}, 900),
  };
  const auto v1 = oracle::check_conditions(store, prefs, cfg,
                                           oracle::store_horizon(store, cfg));
  std::reverse(store.begin(), store.end());
  const auto v2 = oracle::check_conditions(store, prefs, cfg,
                                           oracle::store_horizon(store, cfg));
  REQUIRE(v1.size() == v2.size());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    CHECK(v1[i].kind == v2[i].kind);
    CHECK(v1[i].rid_a == v2[i].rid_a);
    CHECK(v1[i].pid == v2[i].pid);
  }
}

TEST_CASE("feasible envelopes") {
  Config cfg;
  const std::vector<Resource> store = {
      res("r1", "u", {}, kT0, {0, 0}, 10),
      res("r2", "u", {}, kT0 + 100, {50, 0}, 10),
  };
  SUBCASE("one resource: a single expanded disk") {
    const auto env = oracle::feasible_envelope("u", kT0 + 60,
                                               {store[0]}, cfg.v_max);
    REQUIRE(env.disks.size() == 1);
    CHECK(env.disks[0].radius == doctest::Approx(10 + 1.5 * 60));
  }
  SUBCASE("two resources: a two-disk intersection") {
    const auto env =
        oracle::feasible_envelope("u", kT0 + 60, store, cfg.v_max);
    CHECK(env.disks.size() == 2);
  }
  SUBCASE("unknown user is unconstrained") {
    CHECK(oracle::feasible_envelope("x", kT0, store, cfg.v_max)
              .unconstrained());
  }
  SUBCASE("adding a resource never enlarges the envelope") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coord(-200, 200);
    for (int i = 0; i < 50; ++i) {
      const Point probe{coord(rng), coord(rng)};
      const auto small =
          oracle::feasible_envelope("u", kT0 + 60, store, cfg.v_max);
      auto grown_store = store;
      grown_store.push_back(res("r3", "u", {}, kT0 + 30,
                                {coord(rng), coord(rng)}, 20));
      const auto big =
          oracle::feasible_envelope("u", kT0 + 60, grown_store, cfg.v_max);
      const bool in_small =
          oracle::detail::inside_all(probe, small.disks, 0.0);
      const bool in_big = oracle::detail::inside_all(probe, big.disks, 0.0);
      if (in_big) CHECK(in_small);
    }
  }
}

TEST_CASE("semantic privacy check") {
  Config cfg;
  PreferenceStore prefs;
  prefs.add(pref("p", "u", {"e"}, {}, {kT0, kT0 + 600}, 50), cfg);

  SUBCASE("unconstrained users cannot violate") {
    CHECK(oracle::check_semantic_privacy({}, prefs, cfg, {kT0, kT0 + 600}, 60,
                                         1.0)
              .empty());
  }
  SUBCASE("two users pinned 10 m apart during the window") {
    const std::vector<Resource> store = {
        res("r1", "u", {}, kT0 + 300, {0, 0}, 0),
        res("r2", "e", {}, kT0 + 300, {10, 0}, 0),
    };
    const auto v = oracle::check_semantic_privacy(
        store, prefs, cfg, oracle::store_horizon(store, cfg), 60, 1.0);
    REQUIRE(!v.empty());
    bool found = false;
    for (const auto& viol : v) {
      if (viol.t == kT0 + 300) {
        found = true;
        CHECK(viol.max_feasible_distance == doctest::Approx(10.0));
      }
    }
    CHECK(found);
  }
  SUBCASE("same posts an hour before the window: envelopes are huge") {
    const std::vector<Resource> store = {
        res("r1", "u", {}, kT0 - 3600, {0, 0}, 0),
        res("r2", "e", {}, kT0 - 3600, {10, 0}, 0),
    };
    Config fast = cfg;
    fast.v_max = 30.0;
    CHECK(oracle::check_semantic_privacy(
              store, prefs, fast, oracle::store_horizon(store, fast), 60, 1.0)
              .empty());
  }
  SUBCASE("adversary-set resource near the window lifts the rule") {
    prefs = PreferenceStore{};
    prefs.add(pref("p", "u", {"e"}, {"m"}, {kT0, kT0 + 600}, 50), cfg);
    const std::vector<Resource> store = {
        res("r1", "u", {"m"}, kT0 + 300, {0, 0}, 0),
        res("r2", "e", {}, kT0 + 300, {10, 0}, 0),
    };
    CHECK(oracle::check_semantic_privacy(
              store, prefs, cfg, oracle::store_horizon(store, cfg), 60, 1.0)
              .empty());
  }
}

TEST_CASE("separable_beyond handles intersection envelopes") {
  // lens of two disks vs a faraway point
  oracle::Envelope lens;
  lens.disks = {{{0, 0}, 100}, {{50, 0}, 100}};
  oracle::Envelope point;
  point.disks = {{{400, 0}, 0}};
  double max_d = 0.0;
  CHECK(oracle::detail::separable_beyond(lens, point, 300.0, 1.0, 1e-9,
                                         &max_d));
  // the lens reaches x = -50, so the max is about 450
  CHECK(max_d > 300.0);
  CHECK_FALSE(
      oracle::detail::separable_beyond(lens, point, 460.0, 1.0, 1e-9, &max_d));
  CHECK(max_d == doctest::Approx(450.0).epsilon(0.01));
}
