#pragma once

// Sampling-based geometric oracles, independent of the closed forms they
// check. Point sets always include the analytic extreme candidates along
// the center line so that maxima are reached to float precision.

#include <random>
#include <vector>

#include "colocpriv/geo.hpp"

namespace sampling {

using colocpriv::Disk;
using colocpriv::Point;
using colocpriv::dist_points;

inline std::vector<Point> disk_points(const Disk& d, const Disk& other,
                                      std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  const double cd = dist_points(d.center, other.center);
  if (cd > 1e-12) {
    const double ux = (d.center.x - other.center.x) / cd;
    const double uy = (d.center.y - other.center.y) / cd;
    // farthest / nearest points of d relative to the other center
    pts.push_back({d.center.x + d.radius * ux, d.center.y + d.radius * uy});
    pts.push_back({d.center.x - d.radius * ux, d.center.y - d.radius * uy});
    if (cd <= d.radius) pts.push_back(other.center);
  } else {
    pts.push_back(d.center);
  }
  while (static_cast<int>(pts.size()) < n) {
    const double a = angle(rng);
    const double r = d.radius * std::sqrt(unit(rng));
    pts.push_back(
        {d.center.x + r * std::cos(a), d.center.y + r * std::sin(a)});
  }
  return pts;
}

/// max over sampled points of either disk of the exact farthest distance
/// into the other disk (distance to its center plus its radius).
inline double sampled_max_distance(const Disk& a, const Disk& b,
                                   std::mt19937& rng, int n) {
  double best = 0.0;
  for (const auto& p : disk_points(a, b, rng, n))
    best = std::max(best, dist_points(p, b.center) + b.radius);
  for (const auto& q : disk_points(b, a, rng, n))
    best = std::max(best, dist_points(q, a.center) + a.radius);
  return best;
}

inline double point_to_disk(const Point& p, const Disk& d) {
  return std::max(0.0, dist_points(p, d.center) - d.radius);
}

/// min over sampled points of either disk of the exact distance to the
/// other disk; the center-line and contained-center candidates make the
/// minimum reachable for disjoint, overlapping and nested disks alike.
inline double sampled_min_distance(const Disk& a, const Disk& b,
                                   std::mt19937& rng, int n) {
  double best = 1e300;
  for (const auto& p : disk_points(a, b, rng, n))
    best = std::min(best, point_to_disk(p, b));
  for (const auto& q : disk_points(b, a, rng, n))
    best = std::min(best, point_to_disk(q, a));
  return best;
}

/// max over sampled points of a of the exact distance to disk b.
inline double sampled_directed_hausdorff(const Disk& a, const Disk& b,
                                         std::mt19937& rng, int n) {
  double best = 0.0;
  for (const auto& p : disk_points(a, b, rng, n)) {
    best = std::max(best, std::max(0.0, dist_points(p, b.center) - b.radius));
  }
  return best;
}

inline Disk random_disk(std::mt19937& rng, double span = 1000.0,
                        double max_r = 200.0) {
  std::uniform_real_distribution<double> coord(-span, span);
  std::uniform_real_distribution<double> rad(0.0, max_r);
  return Disk{{coord(rng), coord(rng)}, rad(rng)};
}

}  // namespace sampling
