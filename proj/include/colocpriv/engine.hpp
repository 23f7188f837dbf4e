#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "colocpriv/geo.hpp"
#include "colocpriv/graph.hpp"
#include "colocpriv/model.hpp"
#include "colocpriv/rules.hpp"

namespace colocpriv {

/// A change the engine made to a candidate resource before publication.
/// Enlargements grow the radius about a fixed center, never move it.
struct Modification {
  enum class Kind { UserErased, SpatialEnlarged, IndependenceEnlarged };
  Kind kind;
  std::set<UserId> users;  // for UserErased
  Disk old_space;          // for enlargements
  Disk new_space;
  std::string cause;  // pid of the triggering preference, or rid for independence
  std::string cause_rid;  // conflicting resource, for SpatialEnlarged
};

enum class DenyReason {
  InvalidResource,
  IndependenceUnsatisfiable,
  PrivacyUnsatisfiable,
  ContentionExceeded,
};

inline const char* to_string(DenyReason r) {
  switch (r) {
    case DenyReason::InvalidResource: return "InvalidResource";
    case DenyReason::IndependenceUnsatisfiable: return "IndependenceUnsatisfiable";
    case DenyReason::PrivacyUnsatisfiable: return "PrivacyUnsatisfiable";
    case DenyReason::ContentionExceeded: return "ContentionExceeded";
  }
  return "?";
}

struct PublicationDecision {
  bool published = false;
  Resource resource;  // final form when published
  std::vector<Modification> modifications;
  int retries = 0;
  std::optional<DenyReason> denied_reason;
  std::string denied_cause;  // pid or rid that forced the denial
};

namespace detail {

struct Denial {
  DenyReason reason;
  std::string cause;
};

/// Grows r.space (or erases shared users) until r is independent of every
/// stored resource sharing a user with it. Growth helps the "stored
/// resource reachable from r" direction and hurts the opposite one, so
/// the loop falls back to erasure when no radius works.
inline std::optional<Denial> enforce_independence(
    Resource& r, const ResourceStore& store, std::size_t snapshot,
    const Config& cfg, std::vector<Modification>& mods) {
  const auto stored = store.snapshot_view(snapshot);
  for (std::size_t pass = 0; pass <= r.users.size() + 1; ++pass) {
    // Radius needed so that every shared-user resource is reachable from r.
    double delta = 0.0;
    std::string binding_rid;
    for (const auto& other : stored) {
      if (other.rid == r.rid || !share_user(r, other)) continue;
      const auto dt =
          std::llabs(static_cast<long long>(r.time - other.time));
      if (dt == 0) continue;  // growth cannot fix the zero-elapsed case
      const double need = dist_points(r.space.center, other.space.center) +
                          other.space.radius - r.space.radius -
                          cfg.v_max * static_cast<double>(dt);
      if (need > delta) {
        delta = need + std::max(cfg.epsilon, 1e-9);
        binding_rid = other.rid;
      }
    }
    Disk candidate{r.space.center, r.space.radius + std::max(0.0, delta)};

    std::set<UserId> to_erase;
    for (const auto& other : stored) {
      if (other.rid == r.rid || !share_user(r, other)) continue;
      Resource probe = r;
      probe.space = candidate;
      if (independent(probe, other, cfg.v_max, cfg.epsilon)) continue;
      for (const auto& u : r.users)
        if (other.tags(u)) to_erase.insert(u);
    }
    if (to_erase.empty()) {
      if (delta > 0.0) {
        mods.push_back({Modification::Kind::IndependenceEnlarged, {}, r.space,
                        candidate, binding_rid});
        r.space = candidate;
      }
      return std::nullopt;
    }
    if (to_erase.count(r.owner))
      return Denial{DenyReason::IndependenceUnsatisfiable, r.rid};
    for (const auto& u : to_erase) r.users.erase(u);
    mods.push_back({Modification::Kind::UserErased, to_erase, {}, {}, ""});
  }
  return Denial{DenyReason::IndependenceUnsatisfiable, r.rid};
}

/// Direct co-location pass: erase excluded users whenever a resource
/// would reveal an invalid direct co-location. Runs to a fixed point
/// since erasures can retire preferences of users no longer tagged.
inline void sanitize_direct(Resource& r, const PreferenceStore& prefs,
                            const Config& cfg,
                            std::vector<Modification>& mods) {
  const TimeInterval horizon = query_horizon(r.time, cfg);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& u : std::set<UserId>(r.users)) {
      if (!r.tags(u)) continue;
      for (const auto& phi : prefs.of(u)) {
        if (!is_direct_coloc(r, u, phi)) continue;
        bool invalid = false;
        for (const auto& occ : materialize_occurrences(phi, horizon)) {
          if (!is_valid_direct(r, u, phi, occ, cfg.v_max)) {
            invalid = true;
            break;
          }
        }
        if (!invalid) continue;
        std::set<UserId> erased;
        if (phi.excluding.count(r.owner)) {
          // The preference of a tagged non-owner targets the resource
          // owner; erase the protected user instead of the owner.
          erased.insert(u);
        } else {
          for (const auto& e : phi.excluding)
            if (r.tags(e)) erased.insert(e);
        }
        for (const auto& e : erased) r.users.erase(e);
        mods.push_back({Modification::Kind::UserErased, erased, {}, {}, phi.pid});
        changed = true;
      }
      if (changed) break;
    }
  }
}

/// Minimal enlargement of rS that pushes its worst-case distance to r2S
/// up to exactly target_d, provided the grown resource stays independent
/// of every stored resource. nullopt means fall back to user erasure.
inline std::optional<Disk> enlargement(const Disk& rS, const Disk& r2S,
                                       double target_d, const Resource& r_meta,
                                       const ResourceStore& store,
                                       std::size_t snapshot, const Config& cfg) {
  const double delta = target_d - dmax_disks(rS, r2S);
  if (delta <= 0.0) return rS;
  Disk grown{rS.center, rS.radius + delta};
  Resource probe = r_meta;
  probe.space = grown;
  for (const auto& other : store.snapshot_view(snapshot)) {
    if (other.rid == r_meta.rid) continue;
    if (!independent(probe, other, cfg.v_max, cfg.epsilon)) return std::nullopt;
  }
  return grown;
}

/// One full execution of the sanitization pipeline against a snapshot.
inline std::variant<Resource, Denial> run_pipeline(
    const Resource& submitted, const ResourceStore& store,
    std::size_t snapshot, const PreferenceStore& prefs, const Config& cfg,
    bool literal_eq13, std::vector<Modification>& mods) {
  Resource r = submitted;
  if (auto d = enforce_independence(r, store, snapshot, cfg, mods)) return *d;
  sanitize_direct(r, prefs, cfg, mods);

  const TimeInterval horizon = query_horizon(r.time, cfg);
  const CoLocationGraph g = build_coloc_graph(r, store, snapshot, cfg.d_max);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& edge : g.edges) {
      const Resource other = store.get(edge.neighbor_idx);
      std::set<UserId> involved = r.users;
      involved.insert(other.users.begin(), other.users.end());
      for (const auto& u : involved) {
        for (const auto& phi : prefs.of(u)) {
          // Both orientations of the pair: the stored resource cannot be
          // modified, so either way the fix lands on r.
          for (int orient = 0; orient < 2; ++orient) {
            const Resource& a = orient == 0 ? r : other;
            const Resource& b = orient == 0 ? other : r;
            if (!is_indirect_coloc(a, b, u, phi, cfg.v_max)) continue;
            bool invalid = false;
            for (const auto& occ : materialize_occurrences(phi, horizon)) {
              if (!is_valid_indirect(a, b, u, phi, occ, cfg.v_max,
                                     literal_eq13)) {
                invalid = true;
                break;
              }
            }
            if (!invalid) continue;
            auto grown = enlargement(r.space, other.space, phi.distance, r,
                                     store, snapshot, cfg);
            if (grown && grown->radius > r.space.radius) {
              mods.push_back({Modification::Kind::SpatialEnlarged, {}, r.space,
                              *grown, phi.pid, other.rid});
              r.space = *grown;
              changed = true;
              continue;
            }
            if (grown) continue;  // already wide enough, nothing to do
            // Erasure branch with the owner guard: try the full
            // u-plus-excluding erasure first, then erasing u alone.
            std::set<UserId> opt1 = r.users;
            opt1.erase(u);
            for (const auto& e : phi.excluding) opt1.erase(e);
            std::set<UserId> opt2 = r.users;
            opt2.erase(u);
            const std::set<UserId>* pick = nullptr;
            for (const auto* opt : {&opt1, &opt2}) {
              if (!opt->count(r.owner)) continue;
              Resource trial = r;
              trial.users = *opt;
              const Resource& ta = orient == 0 ? trial : other;
              const Resource& tb = orient == 0 ? other : trial;
              if (!is_indirect_coloc(ta, tb, u, phi, cfg.v_max)) {
                pick = opt;
                break;
              }
            }
            if (!pick)
              return Denial{DenyReason::PrivacyUnsatisfiable, phi.pid};
            std::set<UserId> erased;
            for (const auto& x : r.users)
              if (!pick->count(x)) erased.insert(x);
            r.users = *pick;
            mods.push_back(
                {Modification::Kind::UserErased, erased, {}, {}, phi.pid});
            changed = true;
          }
        }
      }
    }
  }
  return r;
}

}  // namespace detail

/// Full publication pipeline: validate, make independent, sanitize direct
/// and indirect co-locations, then commit optimistically. If the spatial
/// neighborhood changed between the snapshot and the commit section, the
/// whole body re-executes against a fresh snapshot.
inline PublicationDecision publish(const Resource& submitted,
                                   ResourceStore& store,
                                   const PreferenceStore& prefs,
                                   const SocialGraph& social,
                                   const Config& cfg,
                                   bool literal_eq13 = false) {
  PublicationDecision decision;
  if (submitted.users.empty() || !validate_resource(submitted, social).empty()) {
    decision.denied_reason = DenyReason::InvalidResource;
    decision.denied_cause = submitted.rid;
    decision.resource = submitted;
    return decision;
  }

  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    decision.retries = attempt;
    decision.modifications.clear();
    const std::size_t snapshot = store.size();
    auto result = detail::run_pipeline(submitted, store, snapshot, prefs, cfg,
                                       literal_eq13, decision.modifications);
    if (auto* denial = std::get_if<detail::Denial>(&result)) {
      decision.denied_reason = denial->reason;
      decision.denied_cause = denial->cause;
      decision.resource = submitted;
      return decision;
    }
    Resource final_r = std::get<Resource>(result);

    const CoLocationGraph g_snapshot =
        build_coloc_graph(final_r, store, snapshot, cfg.d_max);
    {
      std::scoped_lock commit(store.commit_mutex());
      const std::size_t now = store.size();
      const CoLocationGraph g_now =
          build_coloc_graph(final_r, store, now, cfg.d_max);
      bool clean = g_snapshot.same_structure(g_now, cfg.epsilon);
      if (clean) {
        // A concurrently committed resource outside the spatial
        // neighborhood can still break independence through a shared user.
        for (std::size_t idx = snapshot; idx < now && clean; ++idx) {
          if (!independent(final_r, store.get(idx), cfg.v_max, cfg.epsilon))
            clean = false;
        }
      }
      if (clean) {
        store.append_locked(final_r);
        decision.published = true;
        decision.resource = final_r;
        return decision;
      }
    }
  }
  decision.denied_reason = DenyReason::ContentionExceeded;
  decision.denied_cause = submitted.rid;
  decision.resource = submitted;
  return decision;
}

}  // namespace colocpriv
