#include <doctest.h>

#include <random>

#include "colocpriv/graph.hpp"
#include "colocpriv/json_io.hpp"
#include "sampling.hpp"

using namespace colocpriv;

namespace {

Resource res(const std::string& rid, TimeStamp t, Point c, double r) {
  Resource out;
  out.rid = rid;
  out.owner = "u";
  out.users = {"u"};
  out.time = t;
  out.space = {c, r};
  return out;
}

}  // namespace

TEST_CASE("graph on an empty store has no edges") {
  Config cfg;
  ResourceStore store(cfg.d_max);
  const auto g = build_coloc_graph(res("r", 0, {0, 0}, 0), store, 0, cfg.d_max);
  CHECK(g.center_rid == "r");
  CHECK(g.edges.empty());
}

TEST_CASE("near resource yields one weighted edge") {
  Config cfg;
  ResourceStore store(cfg.d_max);
  store.append_locked(res("a", 0, {10, 0}, 0));
  const auto g =
      build_coloc_graph(res("r", 0, {0, 0}, 0), store, 1, cfg.d_max);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].neighbor_rid == "a");
  CHECK(g.edges[0].weight == doctest::Approx(10.0));
}

TEST_CASE("edge condition is strictly below d_max") {
  Config cfg;
  ResourceStore store(cfg.d_max);
  store.append_locked(res("a", 0, {cfg.d_max, 0}, 0));
  store.append_locked(res("b", 0, {cfg.d_max - 0.001, 0}, 0));
  const auto g =
      build_coloc_graph(res("r", 0, {0, 0}, 0), store, 2, cfg.d_max);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].neighbor_rid == "b");
}

TEST_CASE("edges ignore time entirely") {
  Config cfg;
  ResourceStore store(cfg.d_max);
  store.append_locked(res("old", -100 * 365 * 86400LL, {5, 0}, 0));
  const auto g =
      build_coloc_graph(res("r", 0, {0, 0}, 0), store, 1, cfg.d_max);
  CHECK(g.edges.size() == 1);
}

TEST_CASE("grid-backed build equals brute force on random stores") {
  std::mt19937 rng(321);
  Config cfg;
  for (int round = 0; round < 5; ++round) {
    ResourceStore store(cfg.d_max);
    std::vector<Resource> all;
    const int n = 100 + round * 100;
    for (int i = 0; i < n; ++i) {
      auto r = res("r" + std::to_string(1000 + i), i,
                   sampling::random_disk(rng, 3000, 0).center,
                   std::uniform_real_distribution<double>(0, 300)(rng));
      store.append_locked(r);
      all.push_back(r);
    }
    const Resource cand =
        res("cand", 0, sampling::random_disk(rng, 3000, 0).center, 50);
    const auto g = build_coloc_graph(cand, store, all.size(), cfg.d_max);
    std::vector<std::string> brute;
    for (const auto& r : all)
      if (dmax_disks(cand.space, r.space) < cfg.d_max) brute.push_back(r.rid);
    std::sort(brute.begin(), brute.end());
    REQUIRE(g.edges.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i)
      CHECK(g.edges[i].neighbor_rid == brute[i]);
  }
}

TEST_CASE("structural equality compares weights within epsilon") {
  CoLocationGraph a;
  a.center_rid = "r";
  a.edges = {{"x", 0, 10.0}};
  CoLocationGraph b = a;
  CHECK(a.same_structure(b, 1e-9));
  b.edges[0].weight = 10.0 + 1e-6;
  CHECK_FALSE(a.same_structure(b, 1e-9));
  b.edges[0].weight = 10.0;
  b.edges[0].neighbor_rid = "y";
  CHECK_FALSE(a.same_structure(b, 1e-9));
  b = a;
  b.edges.push_back({"z", 1, 5.0});
  CHECK_FALSE(a.same_structure(b, 1e-9));
}

TEST_CASE("graph dumps as rid-sorted adjacency JSON") {
  Config cfg;
  ResourceStore store(cfg.d_max);
  store.append_locked(res("b", 0, {10, 0}, 0));
  store.append_locked(res("a", 0, {20, 0}, 0));
  const auto g =
      build_coloc_graph(res("r", 0, {0, 0}, 0), store, 2, cfg.d_max);
  const json j = to_json(g);
  CHECK(j["center"] == "r");
  REQUIRE(j["edges"].size() == 2);
  CHECK(j["edges"][0]["rid"] == "a");
  CHECK(j["edges"][1]["rid"] == "b");
}
