#include <doctest.h>

#include "colocpriv/json_io.hpp"
#include "colocpriv/model.hpp"

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

}  // namespace

TEST_CASE("validate_resource enforces the friendship rule") {
  SocialGraph g;
  g.add_friend("o", "f");
  g.add_user("x");

  CHECK(validate_resource(res("r", "o", {}, 0, {0, 0}, 0), g).empty());
  CHECK(validate_resource(res("r", "o", {"f"}, 0, {0, 0}, 0), g).empty());

  const auto bad = validate_resource(res("r", "o", {"x"}, 0, {0, 0}, 0), g);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].kind == ValidationError::NonFriendTagged);
  CHECK(bad[0].user == "x");

  Resource no_owner = res("r", "o", {"f"}, 0, {0, 0}, 0);
  no_owner.users.erase("o");
  const auto miss = validate_resource(no_owner, g);
  REQUIRE(miss.size() == 1);
  CHECK(miss[0].kind == ValidationError::OwnerMissing);
}

TEST_CASE("validate_resource matches brute force over Eq-style membership") {
  SocialGraph g;
  g.add_friend("o", "a");
  g.add_friend("o", "b");
  g.add_user("c");
  const std::vector<UserId> pool = {"a", "b", "c"};
  for (int mask = 0; mask < 8; ++mask) {
    Resource r = res("r", "o", {}, 0, {0, 0}, 0);
    for (int i = 0; i < 3; ++i)
      if (mask & (1 << i)) r.users.insert(pool[i]);
    bool ok = true;
    for (const auto& u : r.users)
      if (u != r.owner && !g.friends(r.owner, u)) ok = false;
    CHECK(validate_resource(r, g).empty() == ok);
  }
}

TEST_CASE("materialize_occurrences") {
  PrivacyPreference p;
  p.pid = "p";
  p.owner = "o";
  p.excluding = {"e"};
  p.window = {1000, 2000};

  SUBCASE("once inside horizon") {
    const auto occ = materialize_occurrences(p, {0, 10000});
    REQUIRE(occ.size() == 1);
    CHECK(occ[0] == p.window);
  }
  SUBCASE("once disjoint from horizon") {
    CHECK(materialize_occurrences(p, {5000, 10000}).empty());
  }
  SUBCASE("daily evening preference over three days") {
    // 19:00-23:00 each day
    p.window = {19 * 3600, 23 * 3600};
    p.recurrence = Recurrence::Daily;
    const auto occ = materialize_occurrences(p, {0, 3 * 86400});
    REQUIRE(occ.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(occ[i].start == 19 * 3600 + static_cast<std::int64_t>(i) * 86400);
      CHECK(occ[i].length() == 4 * 3600);
    }
  }
  SUBCASE("recurrence starts at the base window, never before") {
    p.recurrence = Recurrence::Daily;
    const auto occ = materialize_occurrences(p, {-10 * 86400, 1500});
    REQUIRE(occ.size() == 1);
    CHECK(occ[0] == p.window);
  }
  SUBCASE("weekly occurrences never overlap") {
    p.window = {0, 86400};  // a full day, period one week
    p.recurrence = Recurrence::Weekly;
    const auto occ = materialize_occurrences(p, {0, 30 * 86400});
    for (std::size_t i = 1; i < occ.size(); ++i)
      CHECK(occ[i - 1].end < occ[i].start);
  }
}

TEST_CASE("preference store bounds") {
  Config cfg;
  PreferenceStore ps;
  PrivacyPreference p;
  p.pid = "p0";
  p.owner = "o";
  p.excluding = {"e"};
  p.window = {0, 3600};
  p.distance = 100;
  CHECK_FALSE(ps.add(p, cfg).has_value());

  PrivacyPreference too_long = p;
  too_long.pid = "p1";
  too_long.window = {0, cfg.t_max + 1};
  CHECK(ps.add(too_long, cfg) == PreferenceError::WindowTooLong);

  PrivacyPreference too_far = p;
  too_far.pid = "p2";
  too_far.distance = cfg.d_max + 1;
  CHECK(ps.add(too_far, cfg) == PreferenceError::DistanceTooLarge);

  PrivacyPreference selfish = p;
  selfish.pid = "p3";
  selfish.excluding = {"o"};
  CHECK(ps.add(selfish, cfg) == PreferenceError::OwnerInExcluding);

  CHECK(ps.of("o").size() == 1);
  CHECK(ps.of("nobody").empty());
}

TEST_CASE("resource JSON round trip is bit exact") {
  Resource r = res("r42", "owner", {"friend"}, 1700000123, {12.5, -3.25}, 7.5);
  r.content = std::string("bytes\x01\x02\xff", 8);
  const json j = to_json(r);
  const Resource back = resource_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.content == r.content);
  CHECK(j.contains("content_b64"));
  CHECK(j["space"].contains("cx"));
}

TEST_CASE("preference JSON round trip") {
  PrivacyPreference p;
  p.pid = "p7";
  p.owner = "alice";
  p.excluding = {"bob"};
  p.adversaries = {"mary"};
  p.window = {100, 200};
  p.distance = 50.0;
  p.recurrence = Recurrence::Weekly;
  const json j = to_json(p);
  CHECK(to_json(preference_from_json(j)).dump() == j.dump());
  CHECK(j["recurrence"] == "weekly");
}

TEST_CASE("base64 round trip") {
  for (const std::string s : {"", "a", "ab", "abc", "abcd", "\x00\xff\x10"}) {
    CHECK(b64::decode(b64::encode(s)) == s);
  }
  CHECK(b64::encode("abc") == "YWJj");
}

TEST_CASE("store serialize/deserialize round trip") {
  Config cfg;
  ResourceStore s(cfg.d_max);
  s.append_locked(res("r1", "a", {}, 10, {0, 0}, 5));
  s.append_locked(res("r0", "b", {}, 20, {100, 100}, 0));
  const json dump = store_to_json(s);

  ResourceStore s2(cfg.d_max);
  // dump is rid-sorted; insertion order must not matter for the dump
  for (auto it = dump.rbegin(); it != dump.rend(); ++it)
    s2.append_locked(resource_from_json(*it));
  CHECK(store_to_json(s2).dump() == dump.dump());
}

TEST_CASE("store neighborhood query matches brute force") {
  Config cfg;
  ResourceStore s(cfg.d_max);
  std::vector<Resource> all;
  for (int i = 0; i < 60; ++i) {
    auto r = res("r" + std::to_string(i), "u", {}, i,
                 {static_cast<double>((i * 137) % 5000),
                  static_cast<double>((i * 731) % 5000)},
                 static_cast<double>(i % 40));
    s.append_locked(r);
    all.push_back(r);
  }
  const Disk q{{2500, 2500}, 10};
  const auto got = s.near(q, cfg.d_max, s.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (dmax_disks(q, all[i].space) < cfg.d_max) {
      CHECK(std::find(got.begin(), got.end(), i) != got.end());
    }
  }
}
