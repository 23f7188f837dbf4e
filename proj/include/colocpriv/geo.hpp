#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

namespace colocpriv {

/// Planar point, coordinates in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed disk; radius 0 denotes an exact location.
struct Disk {
  Point center;
  double radius = 0.0;

  friend bool operator==(const Disk&, const Disk&) = default;
};

/// Seconds since epoch. Integer so that time comparisons are exact.
using TimeStamp = std::int64_t;

/// Closed time interval [start, end].
struct TimeInterval {
  TimeStamp start = 0;
  TimeStamp end = 0;

  bool contains(TimeStamp t) const { return start <= t && t <= end; }
  bool overlaps(const TimeInterval& o) const {
    return start <= o.end && o.start <= end;
  }
  std::int64_t length() const { return end - start; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Global bounds of the deployment: maximum user speed, maximum
/// preference window length, maximum preference distance (which doubles
/// as the co-location graph neighborhood radius).
struct Config {
  double v_max = 1.5;      // m/s, pedestrian default
  std::int64_t t_max = 86400;  // s
  double d_max = 1000.0;   // m
  double epsilon = 1e-9;   // m, zero-elapsed-time containment tolerance
  int max_retries = 8;
};

inline double dist_points(const Point& p, const Point& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

/// Maximum distance between a point of a and a point of b.
inline double dmax_disks(const Disk& a, const Disk& b) {
  return dist_points(a.center, b.center) + a.radius + b.radius;
}

/// Minimum distance between a point of a and a point of b (0 if they overlap).
inline double dmin_disks(const Disk& a, const Disk& b) {
  return std::max(0.0, dist_points(a.center, b.center) - a.radius - b.radius);
}

/// Region reachable from s within dt seconds at speed <= v_max
/// (Minkowski expansion of the disk).
inline Disk ext(const Disk& s, double dt, double v_max) {
  assert(dt >= 0.0);
  return Disk{s.center, s.radius + v_max * dt};
}

/// max over points p of a of the distance from p to the nearest point of b.
/// Zero iff a is contained in b.
inline double directed_hausdorff(const Disk& a, const Disk& b) {
  return std::max(0.0, dist_points(a.center, b.center) + a.radius - b.radius);
}

/// True when every point of to_s can be reached from some point of from_s
/// within the elapsed time at speed < v_max. At zero elapsed time this
/// degenerates to containment within epsilon: nobody moves in zero time.
inline bool reachable(const Disk& from_s, TimeStamp from_t, const Disk& to_s,
                      TimeStamp to_t, double v_max, double epsilon) {
  const auto dt = std::llabs(static_cast<long long>(to_t - from_t));
  const double dh = directed_hausdorff(to_s, from_s);
  if (dt == 0) return dh <= epsilon;
  return dh < v_max * static_cast<double>(dt);
}

/// Nearest instant of the interval to t (projection onto [start, end]).
inline TimeStamp nearest_time(const TimeInterval& interval, TimeStamp t) {
  return std::clamp(t, interval.start, interval.end);
}

}  // namespace colocpriv
