#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "colocpriv/geo.hpp"
#include "colocpriv/model.hpp"

namespace colocpriv {

/// Star of spatially near resources around a candidate publication.
/// An edge links the candidate to every stored resource whose worst-case
/// distance is under d_max, carrying that distance as weight.
struct CoLocationGraph {
  struct Edge {
    std::string neighbor_rid;
    std::size_t neighbor_idx;  // index into the store snapshot
    double weight;             // dmax between the two disks
  };

  std::string center_rid;
  std::vector<Edge> edges;  // sorted by neighbor_rid

  /// Structural equality: same center, same neighbor set, weights within eps.
  bool same_structure(const CoLocationGraph& o, double eps) const {
    if (center_rid != o.center_rid || edges.size() != o.edges.size())
      return false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].neighbor_rid != o.edges[i].neighbor_rid) return false;
      if (std::fabs(edges[i].weight - o.edges[i].weight) > eps) return false;
    }
    return true;
  }
};

inline CoLocationGraph build_coloc_graph(const Resource& r,
                                         const ResourceStore& store,
                                         std::size_t snapshot, double d_max) {
  CoLocationGraph g;
  g.center_rid = r.rid;
  for (std::size_t idx : store.near(r.space, d_max, snapshot)) {
    const Resource other = store.get(idx);
    if (other.rid == r.rid) continue;
    const double w = dmax_disks(r.space, other.space);
    if (w < d_max) g.edges.push_back({other.rid, idx, w});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
    return a.neighbor_rid < b.neighbor_rid;
  });
  return g;
}

}  // namespace colocpriv
