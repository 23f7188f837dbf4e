#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "colocpriv/geo.hpp"

namespace colocpriv {

using UserId = std::string;

/// A published item: tagged users, timestamp, spatial region, content.
/// Every tagged user is asserted to be inside `space` at `time`.
struct Resource {
  std::string rid;
  std::set<UserId> users;
  UserId owner;
  TimeStamp time = 0;
  Disk space;
  std::string content;  // opaque bytes

  bool tags(const UserId& u) const { return users.count(u) != 0; }
};

/// Symmetric friendship relation, no self-loops.
class SocialGraph {
 public:
  void add_user(const UserId& u) { users_.insert(u); }
  bool has_user(const UserId& u) const { return users_.count(u) != 0; }

  void add_friend(const UserId& a, const UserId& b) {
    if (a == b) return;
    users_.insert(a);
    users_.insert(b);
    edges_.insert(ordered(a, b));
  }

  bool friends(const UserId& a, const UserId& b) const {
    return edges_.count(ordered(a, b)) != 0;
  }

  const std::set<std::pair<UserId, UserId>>& edges() const { return edges_; }
  const std::set<UserId>& users() const { return users_; }

 private:
  static std::pair<UserId, UserId> ordered(const UserId& a, const UserId& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::set<UserId> users_;
  std::set<std::pair<UserId, UserId>> edges_;
};

enum class Recurrence { Once, Daily, Weekly, Yearly };

inline std::int64_t recurrence_period(Recurrence r) {
  switch (r) {
    case Recurrence::Once: return 0;
    case Recurrence::Daily: return 86400;
    case Recurrence::Weekly: return 7 * 86400;
    case Recurrence::Yearly: return 365LL * 86400;
  }
  return 0;
}

/// Who the owner must not be provably co-located with (excluding set),
/// who exempts a resource from the rule (adversary set), when, and how close.
struct PrivacyPreference {
  std::string pid;
  UserId owner;
  std::set<UserId> excluding;
  std::set<UserId> adversaries;
  TimeInterval window;
  double distance = 0.0;
  Recurrence recurrence = Recurrence::Once;
};

/// All concrete windows of the preference intersecting the horizon,
/// in order. Recurring preferences repeat forward from their base window.
inline std::vector<TimeInterval> materialize_occurrences(
    const PrivacyPreference& p, const TimeInterval& horizon) {
  std::vector<TimeInterval> out;
  if (p.recurrence == Recurrence::Once) {
    if (p.window.overlaps(horizon)) out.push_back(p.window);
    return out;
  }
  const std::int64_t period = recurrence_period(p.recurrence);
  std::int64_t k = 0;
  if (horizon.start > p.window.end) {
    k = (horizon.start - p.window.end + period - 1) / period;
  }
  for (; p.window.start + k * period <= horizon.end; ++k) {
    TimeInterval occ{p.window.start + k * period, p.window.end + k * period};
    if (occ.overlaps(horizon)) out.push_back(occ);
  }
  return out;
}

enum class ValidationError { OwnerMissing, NonFriendTagged };

struct ResourceViolation {
  ValidationError kind;
  UserId user;  // offending user for NonFriendTagged
};

/// Checks that the owner tags itself and only tags friends.
inline std::vector<ResourceViolation> validate_resource(const Resource& r,
                                                        const SocialGraph& g) {
  std::vector<ResourceViolation> out;
  if (!r.tags(r.owner)) out.push_back({ValidationError::OwnerMissing, r.owner});
  for (const auto& u : r.users) {
    if (u == r.owner) continue;
    if (!g.friends(r.owner, u))
      out.push_back({ValidationError::NonFriendTagged, u});
  }
  return out;
}

enum class PreferenceError { WindowTooLong, DistanceTooLarge, OwnerInExcluding };

class PreferenceStore {
 public:
  std::optional<PreferenceError> add(const PrivacyPreference& p,
                                     const Config& cfg) {
    if (p.window.length() > cfg.t_max) return PreferenceError::WindowTooLong;
    if (p.distance > cfg.d_max) return PreferenceError::DistanceTooLarge;
    if (p.excluding.count(p.owner)) return PreferenceError::OwnerInExcluding;
    prefs_[p.owner].push_back(p);
    auto& v = prefs_[p.owner];
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.pid < b.pid; });
    return std::nullopt;
  }

  /// Preferences of u, sorted by pid. Empty for unknown users.
  const std::vector<PrivacyPreference>& of(const UserId& u) const {
    static const std::vector<PrivacyPreference> kEmpty;
    auto it = prefs_.find(u);
    return it == prefs_.end() ? kEmpty : it->second;
  }

  const std::map<UserId, std::vector<PrivacyPreference>>& all() const {
    return prefs_;
  }

 private:
  std::map<UserId, std::vector<PrivacyPreference>> prefs_;
};

/// Append-only resource set with a uniform grid over disk centers for
/// fixed-radius neighborhood queries. Reads are addressed by a snapshot
/// prefix length, so a snapshot is just a count.
class ResourceStore {
 public:
  explicit ResourceStore(double cell_size = 1000.0) : cell_(cell_size) {}

  std::size_t size() const {
    std::shared_lock lk(mu_);
    return resources_.size();
  }

  /// Appends under the caller-held commit lock (see commit_mutex()).
  void append_locked(const Resource& r) {
    std::unique_lock lk(mu_);
    by_rid_[r.rid] = resources_.size();
    grid_[cell_of(r.space.center)].push_back(resources_.size());
    max_radius_ = std::max(max_radius_, r.space.radius);
    resources_.push_back(r);
  }

  Resource get(std::size_t idx) const {
    std::shared_lock lk(mu_);
    return resources_[idx];
  }

  std::optional<Resource> find(const std::string& rid) const {
    std::shared_lock lk(mu_);
    auto it = by_rid_.find(rid);
    if (it == by_rid_.end()) return std::nullopt;
    return resources_[it->second];
  }

  /// All resources in the first `snapshot` entries, in append order.
  std::vector<Resource> snapshot_view(std::size_t snapshot) const {
    std::shared_lock lk(mu_);
    return {resources_.begin(), resources_.begin() + snapshot};
  }

  std::vector<Resource> all() const { return snapshot_view(size()); }

  /// Indices (within the snapshot prefix) of resources whose disk can be
  /// within `radius` meters of `q` (dmax test done by the caller).
  std::vector<std::size_t> near(const Disk& q, double radius,
                                std::size_t snapshot) const {
    std::shared_lock lk(mu_);
    const double reach = radius + q.radius + max_radius_;
    const auto lo = cell_of({q.center.x - reach, q.center.y - reach});
    const auto hi = cell_of({q.center.x + reach, q.center.y + reach});
    std::vector<std::size_t> out;
    for (std::int64_t cx = lo.first; cx <= hi.first; ++cx) {
      for (std::int64_t cy = lo.second; cy <= hi.second; ++cy) {
        auto it = grid_.find({cx, cy});
        if (it == grid_.end()) continue;
        for (std::size_t idx : it->second)
          if (idx < snapshot) out.push_back(idx);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Serializes one commit section at a time.
  std::mutex& commit_mutex() { return commit_mu_; }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(const Point& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }

  double cell_;
  double max_radius_ = 0.0;
  std::vector<Resource> resources_;
  std::map<std::string, std::size_t> by_rid_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> grid_;
  mutable std::shared_mutex mu_;
  std::mutex commit_mu_;
};

/// Horizon of preference occurrences that can interact with a resource at
/// time t: anything further away can neither contain t nor make a
/// co-location invalid given the t_max / d_max / v_max bounds.
inline TimeInterval query_horizon(TimeStamp t, const Config& cfg) {
  const auto pad =
      cfg.t_max + static_cast<std::int64_t>(std::ceil(cfg.d_max / cfg.v_max));
  return {t - pad, t + pad};
}

}  // namespace colocpriv
