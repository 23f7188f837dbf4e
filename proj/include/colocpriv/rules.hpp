#pragma once

#include <algorithm>
#include <set>

#include "colocpriv/geo.hpp"
#include "colocpriv/model.hpp"

namespace colocpriv {

inline bool share_user(const Resource& a, const Resource& b) {
  for (const auto& u : a.users)
    if (b.tags(u)) return true;
  return false;
}

inline bool intersects(const std::set<UserId>& a, const std::set<UserId>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& big = a.size() <= b.size() ? b : a;
  for (const auto& u : small)
    if (big.count(u)) return true;
  return false;
}

/// Two resources are independent when they share no users, or when each
/// is reachable from the other: neither restricts the locations the
/// other claims possible.
inline bool independent(const Resource& r, const Resource& r2, double v_max,
                        double epsilon) {
  if (!share_user(r, r2)) return true;
  return reachable(r2.space, r2.time, r.space, r.time, v_max, epsilon) &&
         reachable(r.space, r.time, r2.space, r2.time, v_max, epsilon);
}

/// A single resource co-locating u with an excluded user, with no
/// adversary-set member tagged to exempt it.
inline bool is_direct_coloc(const Resource& r, const UserId& u,
                            const PrivacyPreference& phi) {
  return r.tags(u) && intersects(r.users, phi.excluding) &&
         !intersects(r.users, phi.adversaries);
}

/// A direct co-location is valid against one occurrence when it happens
/// outside the window and far enough from it that the involved users
/// could have separated beyond phi.distance in time.
inline bool is_valid_direct(const Resource& r, const UserId& u,
                            const PrivacyPreference& phi,
                            const TimeInterval& occ, double v_max) {
  (void)u;
  if (occ.contains(r.time)) return false;
  const auto gap = std::llabs(
      static_cast<long long>(r.time - nearest_time(occ, r.time)));
  return 0.5 * phi.distance / static_cast<double>(gap) < v_max;
}

/// A pair of resources placing u and an excluded user close in space and
/// time, with no adversary-set member tagged in either.
inline bool is_indirect_coloc(const Resource& r, const Resource& r2,
                              const UserId& u, const PrivacyPreference& phi,
                              double v_max) {
  if (r.rid == r2.rid) return false;
  if (!r.tags(u)) return false;
  if (!intersects(r2.users, phi.excluding)) return false;
  if (intersects(r.users, phi.adversaries) ||
      intersects(r2.users, phi.adversaries))
    return false;
  const auto dt = std::llabs(static_cast<long long>(r.time - r2.time));
  const double dmax = dmax_disks(r.space, r2.space);
  if (dt == 0) return dmax < phi.distance;
  return (phi.distance - dmax) / static_cast<double>(dt) > v_max;
}

/// Validity of an indirect co-location against one occurrence. The
/// co-location interval must not overlap the window, and at its later
/// endpoint the group spread plus remaining time must leave room to
/// separate beyond phi.distance. `literal_overlap` evaluates the overlap
/// clause as requiring a nonempty intersection instead; exposed for
/// comparison only.
inline bool is_valid_indirect(const Resource& r, const Resource& r2,
                              const UserId& u, const PrivacyPreference& phi,
                              const TimeInterval& occ, double v_max,
                              bool literal_overlap = false) {
  (void)u;
  const Resource& early = r.time <= r2.time ? r : r2;
  const Resource& late = r.time <= r2.time ? r2 : r;
  const TimeInterval coloc_span{early.time, late.time};
  if (literal_overlap) {
    if (!coloc_span.overlaps(occ)) return false;
  } else {
    if (coloc_span.overlaps(occ)) return false;
  }
  const auto dt = std::llabs(static_cast<long long>(r.time - r2.time));
  const double spread =
      dmax_disks(ext(early.space, static_cast<double>(dt), v_max), late.space);
  const auto gap = std::llabs(
      static_cast<long long>(late.time - nearest_time(occ, late.time)));
  if (gap == 0) return false;
  return 0.5 * (phi.distance - spread) / static_cast<double>(gap) < v_max;
}

}  // namespace colocpriv
