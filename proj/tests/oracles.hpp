#pragma once

// Independent reference models used by the tests and the acceptance binary.
// Nothing here calls into the simulator's messaging code.

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

struct Point {
  double x = 0, y = 0;
};

inline bool linked(Point a, Point b, double range) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy) <= range;
}

/// Hop counts from `source` on the disk graph; -1 = unreachable.
inline std::vector<int> bfs_hops(const std::vector<Point> &pts, int source, double range) {
  std::vector<int> hops(pts.size(), -1);
  std::deque<int> queue{source};
  hops[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < pts.size(); ++v) {
      if (hops[v] >= 0 || !linked(pts[static_cast<std::size_t>(u)], pts[v], range)) continue;
      hops[v] = hops[static_cast<std::size_t>(u)] + 1;
      queue.push_back(static_cast<int>(v));
    }
  }
  return hops;
}

/// A robot handed the target location at a given tick, carrying `value`.
struct Seed {
  int robot = 0;
  std::int64_t tick = 0;
  int value = 0;
};

struct GossipTrace {
  std::vector<std::optional<std::int64_t>> informed_at;
  std::vector<std::optional<int>> value;      // which seed's value each robot took
  std::vector<std::uint64_t> delivered;       // messages delivered on each tick
};

/// Tick-layered spreading on a static disk graph. A robot informed at tick a
/// broadcasts on ticks [a, a + window); a message sent on tick t is read on
/// tick t + 1, and a robot adopts the value of the lowest-id sender it hears
/// first. A seed arriving at tick s wins over messages read the same tick.
inline GossipTrace spread(const std::vector<Point> &pts, const std::vector<Seed> &seeds, std::int64_t window,
                          std::int64_t horizon, double range) {
  const auto n = pts.size();
  GossipTrace g;
  g.informed_at.assign(n, std::nullopt);
  g.value.assign(n, std::nullopt);
  auto broadcasting = [&](std::size_t i, std::int64_t t) {
    return g.informed_at[i] && *g.informed_at[i] <= t && t < *g.informed_at[i] + window;
  };
  for (std::int64_t t = 0; t < horizon; ++t) {
    std::vector<std::optional<int>> heard(n);
    if (t > 0) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {  // ascending sender id: the first heard wins
          if (i != j && broadcasting(i, t - 1) && linked(pts[i], pts[j], range)) {
            heard[j] = g.value[i];
            break;
          }
        }
      }
    }
    for (const auto &s : seeds) {
      const auto r = static_cast<std::size_t>(s.robot);
      if (s.tick == t && !g.informed_at[r]) {
        g.informed_at[r] = t;
        g.value[r] = s.value;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!g.informed_at[j] && heard[j]) {
        g.informed_at[j] = t;
        g.value[j] = heard[j];
      }
    }
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (broadcasting(i, t))
        for (std::size_t j = 0; j < n; ++j) count += (i != j && linked(pts[i], pts[j], range)) ? 1 : 0;
    g.delivered.push_back(count);
  }
  return g;
}

}  // namespace oracle
