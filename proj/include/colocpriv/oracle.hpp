#pragma once

// Brute-force verification that a resource set preserves co-location
// privacy. Predicates here are re-derived from the definitions and share
// only the geometric primitives with the engine, so the two sides form
// an implementation/oracle pair.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "colocpriv/geo.hpp"
#include "colocpriv/model.hpp"

namespace colocpriv::oracle {

struct Violation {
  enum class Kind { DependentPair, InvalidDirect, InvalidIndirect, SemanticColoc };
  Kind kind;
  std::string rid_a;
  std::string rid_b;  // InvalidIndirect / DependentPair
  UserId user;
  UserId excluded;  // SemanticColoc
  std::string pid;
  TimeInterval occurrence{};
  TimeStamp t = 0;                     // SemanticColoc sample instant
  double max_feasible_distance = 0.0;  // SemanticColoc
  std::string evidence;
};

inline bool operator<(const Violation& a, const Violation& b) {
  auto key = [](const Violation& v) {
    return std::tie(v.kind, v.rid_a, v.rid_b, v.user, v.excluded, v.pid,
                    v.occurrence.start, v.t);
  };
  return key(a) < key(b);
}

namespace detail {

inline bool users_intersect(const std::set<UserId>& a,
                            const std::set<UserId>& b) {
  for (const auto& u : a)
    if (b.count(u)) return true;
  return false;
}

inline bool share_any_user(const Resource& a, const Resource& b) {
  return users_intersect(a.users, b.users);
}

// Independence, spelled out from the mutual-reachability definition.
inline bool pair_independent(const Resource& a, const Resource& b,
                             const Config& cfg) {
  if (!share_any_user(a, b)) return true;
  const auto dt = std::llabs(static_cast<long long>(a.time - b.time));
  const double center_d = dist_points(a.space.center, b.space.center);
  // a reachable from b: every point of a within v*dt of some point of b,
  // and symmetrically.
  const double dh_ab = center_d + a.space.radius - b.space.radius;
  const double dh_ba = center_d + b.space.radius - a.space.radius;
  if (dt == 0) return dh_ab <= cfg.epsilon && dh_ba <= cfg.epsilon;
  const double budget = cfg.v_max * static_cast<double>(dt);
  return std::max(0.0, dh_ab) < budget && std::max(0.0, dh_ba) < budget;
}

inline bool direct_coloc(const Resource& r, const UserId& u,
                         const PrivacyPreference& phi) {
  return r.users.count(u) && users_intersect(r.users, phi.excluding) &&
         !users_intersect(r.users, phi.adversaries);
}

inline bool direct_valid(const Resource& r, const PrivacyPreference& phi,
                         const TimeInterval& occ, const Config& cfg) {
  if (occ.contains(r.time)) return false;
  const double gap = static_cast<double>(
      std::llabs(static_cast<long long>(r.time - nearest_time(occ, r.time))));
  return 0.5 * phi.distance / gap < cfg.v_max;
}

inline bool indirect_coloc(const Resource& r, const Resource& r2,
                           const UserId& u, const PrivacyPreference& phi,
                           const Config& cfg) {
  if (r.rid == r2.rid || !r.users.count(u)) return false;
  if (!users_intersect(r2.users, phi.excluding)) return false;
  std::set<UserId> joint = r.users;
  joint.insert(r2.users.begin(), r2.users.end());
  if (users_intersect(joint, phi.adversaries)) return false;
  const auto dt = std::llabs(static_cast<long long>(r.time - r2.time));
  const double spread =
      dist_points(r.space.center, r2.space.center) + r.space.radius +
      r2.space.radius;
  if (dt == 0) return spread < phi.distance;
  return (phi.distance - spread) / static_cast<double>(dt) > cfg.v_max;
}

inline bool indirect_valid(const Resource& r, const Resource& r2,
                           const PrivacyPreference& phi,
                           const TimeInterval& occ, const Config& cfg,
                           bool literal_overlap) {
  const Resource& early = r.time <= r2.time ? r : r2;
  const Resource& late = r.time <= r2.time ? r2 : r;
  const bool overlaps =
      early.time <= occ.end && occ.start <= late.time;
  if (literal_overlap ? !overlaps : overlaps) return false;
  const double dt =
      static_cast<double>(late.time - early.time);
  const double spread =
      dist_points(early.space.center, late.space.center) +
      (early.space.radius + cfg.v_max * dt) + late.space.radius;
  const auto gap = std::llabs(
      static_cast<long long>(late.time - nearest_time(occ, late.time)));
  if (gap == 0) return false;
  return 0.5 * (phi.distance - spread) / static_cast<double>(gap) < cfg.v_max;
}

}  // namespace detail

/// Exhaustive check of the two sufficient conditions: every pair of
/// stored resources independent, every direct and indirect co-location
/// valid for every occurrence inside the horizon.
inline std::vector<Violation> check_conditions(
    const std::vector<Resource>& resources, const PreferenceStore& prefs,
    const Config& cfg, const TimeInterval& horizon,
    bool literal_eq13 = false) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < resources.size(); ++i) {
    for (std::size_t j = i + 1; j < resources.size(); ++j) {
      if (!detail::pair_independent(resources[i], resources[j], cfg)) {
        Violation v;
        v.kind = Violation::Kind::DependentPair;
        v.rid_a = std::min(resources[i].rid, resources[j].rid);
        v.rid_b = std::max(resources[i].rid, resources[j].rid);
        v.evidence = "mutual reachability fails for a shared user";
        out.push_back(v);
      }
    }
  }
  for (const auto& r : resources) {
    for (const auto& u : r.users) {
      for (const auto& phi : prefs.of(u)) {
        if (!detail::direct_coloc(r, u, phi)) continue;
        for (const auto& occ : materialize_occurrences(phi, horizon)) {
          if (detail::direct_valid(r, phi, occ, cfg)) continue;
          Violation v;
          v.kind = Violation::Kind::InvalidDirect;
          v.rid_a = r.rid;
          v.user = u;
          v.pid = phi.pid;
          v.occurrence = occ;
          v.evidence = "direct co-location inside or too close to the window";
          out.push_back(v);
        }
      }
    }
  }
  for (const auto& r : resources) {
    for (const auto& r2 : resources) {
      if (r.rid == r2.rid) continue;
      for (const auto& u : r.users) {
        for (const auto& phi : prefs.of(u)) {
          if (!detail::indirect_coloc(r, r2, u, phi, cfg)) continue;
          for (const auto& occ : materialize_occurrences(phi, horizon)) {
            if (detail::indirect_valid(r, r2, phi, occ, cfg, literal_eq13))
              continue;
            Violation v;
            v.kind = Violation::Kind::InvalidIndirect;
            v.rid_a = r.rid;
            v.rid_b = r2.rid;
            v.user = u;
            v.pid = phi.pid;
            v.occurrence = occ;
            v.evidence = "pair places user and excluded user within phi.D";
            out.push_back(v);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Where a user can possibly be at time t, given every resource that
/// mentions them: the intersection of the expanded disks. Empty disk set
/// means unconstrained (the whole plane).
struct Envelope {
  std::vector<Disk> disks;
  bool unconstrained() const { return disks.empty(); }
};

inline Envelope feasible_envelope(const UserId& u, TimeStamp t,
                                  const std::vector<Resource>& resources,
                                  double v_max) {
  Envelope env;
  for (const auto& r : resources) {
    if (!r.users.count(u)) continue;
    const double dt =
        static_cast<double>(std::llabs(static_cast<long long>(t - r.time)));
    env.disks.push_back(ext(r.space, dt, v_max));
  }
  return env;
}

namespace detail {

inline bool inside_all(const Point& p, const std::vector<Disk>& disks,
                       double tol) {
  for (const auto& d : disks)
    if (dist_points(p, d.center) > d.radius + tol) return false;
  return true;
}

/// Drops disks that contain another disk of the set: they cannot shape
/// the intersection region.
inline std::vector<Disk> prune_redundant(std::vector<Disk> disks) {
  std::sort(disks.begin(), disks.end(),
            [](const Disk& a, const Disk& b) { return a.radius < b.radius; });
  std::vector<Disk> kept;
  for (const auto& d : disks) {
    bool redundant = false;
    for (const auto& k : kept) {
      if (dist_points(d.center, k.center) + k.radius <= d.radius + 1e-12) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(d);
  }
  return kept;
}

/// Corner points of an intersection of disks: circle-circle intersection
/// points that lie inside every disk, plus circle centers that do.
inline std::vector<Point> corner_points(const std::vector<Disk>& disks,
                                        double tol) {
  std::vector<Point> pts;
  for (const auto& d : disks)
    if (inside_all(d.center, disks, tol)) pts.push_back(d.center);
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      const Disk& a = disks[i];
      const Disk& b = disks[j];
      const double d = dist_points(a.center, b.center);
      if (d < 1e-12 || d > a.radius + b.radius ||
          d < std::fabs(a.radius - b.radius))
        continue;
      const double x = (d * d + a.radius * a.radius - b.radius * b.radius) /
                       (2.0 * d);
      const double h2 = a.radius * a.radius - x * x;
      if (h2 < 0.0) continue;
      const double h = std::sqrt(h2);
      const double ux = (b.center.x - a.center.x) / d;
      const double uy = (b.center.y - a.center.y) / d;
      for (double sgn : {1.0, -1.0}) {
        Point p{a.center.x + x * ux - sgn * h * uy,
                a.center.y + x * uy + sgn * h * ux};
        if (inside_all(p, disks, tol)) pts.push_back(p);
      }
    }
  }
  return pts;
}

/// Sample points on the boundary of an intersection of disks: for each
/// circle, the arc segments lying inside every other disk, sampled at
/// roughly grid_res spacing (capped per circle).
inline std::vector<Point> boundary_samples(const std::vector<Disk>& disks,
                                           double grid_res, double tol) {
  std::vector<Point> pts = corner_points(disks, tol);
  constexpr double kTau = 6.283185307179586;
  const std::size_t cap = 4096;
  for (const auto& d : disks) {
    if (d.radius <= 0.0) continue;
    std::size_t n = static_cast<std::size_t>(
        std::ceil(kTau * d.radius / std::max(grid_res, 1e-6)));
    n = std::clamp<std::size_t>(n, 64, cap);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = kTau * static_cast<double>(k) / static_cast<double>(n);
      Point p{d.center.x + d.radius * std::cos(a),
              d.center.y + d.radius * std::sin(a)};
      if (inside_all(p, disks, tol)) pts.push_back(p);
    }
  }
  return pts;
}

/// True when two users' envelopes admit placements further apart than
/// threshold. Closed form for single-disk envelopes; otherwise corner
/// points first, boundary arc sampling as the tie-breaker. Empty
/// envelopes (contradictory constraints) count as separable: there is no
/// placement the adversary can pin down.
inline bool separable_beyond(const Envelope& a, const Envelope& b,
                             double threshold, double grid_res, double tol,
                             double* max_seen) {
  const auto da = prune_redundant(a.disks);
  const auto db = prune_redundant(b.disks);
  if (da.size() == 1 && db.size() == 1) {
    const double m = dmax_disks(da[0], db[0]);
    if (max_seen) *max_seen = m;
    return m > threshold;
  }

  // A single-disk side contributes its radius as a bonus on top of the
  // center point; a multi-disk side is represented by feasible points.
  const bool single_a = da.size() == 1;
  const bool single_b = db.size() == 1;
  const double bonus =
      (single_a ? da[0].radius : 0.0) + (single_b ? db[0].radius : 0.0);

  auto scan = [&](const std::vector<Point>& pa, const std::vector<Point>& pb,
                  double& best) {
    for (const auto& p : pa) {
      for (const auto& q : pb) {
        const double d = dist_points(p, q) + bonus;
        if (d > best) best = d;
        if (d > threshold) return true;
      }
    }
    return false;
  };

  double best = 0.0;
  const auto ca =
      single_a ? std::vector<Point>{da[0].center} : corner_points(da, tol);
  const auto cb =
      single_b ? std::vector<Point>{db[0].center} : corner_points(db, tol);
  if (scan(ca, cb, best)) {
    if (max_seen) *max_seen = best;
    return true;
  }

  const auto pa = single_a ? ca : boundary_samples(da, grid_res, tol);
  const auto pb = single_b ? cb : boundary_samples(db, grid_res, tol);
  if (pa.empty() || pb.empty()) {
    if (max_seen) *max_seen = best;
    return true;  // empty feasible region, nothing to violate
  }
  const bool ok = scan(pa, pb, best);
  if (max_seen) *max_seen = best;
  return ok;
}

}  // namespace detail

/// Possibilistic semantic check: for every preference, every excluded
/// user and every sampled instant of every occurrence, the adversary
/// must be unable to rule out a separation beyond phi.D. One-sided by
/// construction: reported violations are sound, absence is evidence.
inline std::vector<Violation> check_semantic_privacy(
    const std::vector<Resource>& resources, const PreferenceStore& prefs,
    const Config& cfg, const TimeInterval& horizon, std::int64_t time_step,
    double grid_res) {
  std::vector<Violation> out;
  const std::int64_t reach_pad =
      cfg.t_max + static_cast<std::int64_t>(std::ceil(cfg.d_max / cfg.v_max));
  for (const auto& [u, user_prefs] : prefs.all()) {
    for (const auto& phi : user_prefs) {
      for (const auto& occ : materialize_occurrences(phi, horizon)) {
        // Adversary-set exemption: a resource near the occurrence that
        // tags an adversary together with a protected party lifts the rule.
        const TimeInterval reach{occ.start - reach_pad, occ.end + reach_pad};
        for (const auto& e : phi.excluding) {
          bool exempt = false;
          for (const auto& r : resources) {
            if (!reach.contains(r.time)) continue;
            if (!detail::users_intersect(r.users, phi.adversaries)) continue;
            if (r.users.count(u) || r.users.count(e)) {
              exempt = true;
              break;
            }
          }
          if (exempt) continue;
          for (TimeStamp t = occ.start; t <= occ.end; t += time_step) {
            const Envelope eu = feasible_envelope(u, t, resources, cfg.v_max);
            const Envelope ee = feasible_envelope(e, t, resources, cfg.v_max);
            if (eu.unconstrained() || ee.unconstrained()) continue;
            double max_d = 0.0;
            if (!detail::separable_beyond(eu, ee, phi.distance, grid_res,
                                          cfg.epsilon, &max_d)) {
              Violation v;
              v.kind = Violation::Kind::SemanticColoc;
              v.user = u;
              v.excluded = e;
              v.pid = phi.pid;
              v.occurrence = occ;
              v.t = t;
              v.max_feasible_distance = max_d;
              v.evidence =
                  "feasible placements never exceed phi.D at sampled instant";
              out.push_back(v);
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Horizon wide enough to cover every occurrence that can interact with
/// any stored resource.
inline TimeInterval store_horizon(const std::vector<Resource>& resources,
                                  const Config& cfg) {
  if (resources.empty()) return {0, 0};
  TimeStamp lo = resources.front().time;
  TimeStamp hi = resources.front().time;
  for (const auto& r : resources) {
    lo = std::min(lo, r.time);
    hi = std::max(hi, r.time);
  }
  const auto pad =
      cfg.t_max + static_cast<std::int64_t>(std::ceil(cfg.d_max / cfg.v_max));
  return {lo - pad, hi + pad};
}

}  // namespace colocpriv::oracle
