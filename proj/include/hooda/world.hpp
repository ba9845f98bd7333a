#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/geometry.hpp"
#include "hooda/rng.hpp"

namespace hooda::sim {

struct WorldConfig {
  double extent_x = 100.0;  // meters
  double extent_y = 100.0;
  double cell_size = 1.0;       // coverage grid resolution
  double tick = 0.5;            // seconds per step
  double horizon = 240.0;       // trial length, seconds
  double uav_speed = 5.0;       // m/s
  double target_speed = 1.0;    // m/s
  double sensing_radius = 2.5;  // meters, closed ball
  int n_uavs = 15;
  int n_targets = 1;
  std::uint64_t seed = 1;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

inline void validate(const WorldConfig& c) {
  if (c.extent_x <= 0.0 || c.extent_y <= 0.0)
    throw ValidationError("world: extent dimensions must be > 0");
  if (c.cell_size <= 0.0 || c.cell_size > std::min(c.extent_x, c.extent_y))
    throw ValidationError("world: cell_size must be in (0, min extent]");
  if (c.tick <= 0.0) throw ValidationError("world: tick must be > 0");
  if (c.horizon < c.tick) throw ValidationError("world: horizon must be >= tick");
  if (c.sensing_radius <= 0.0) throw ValidationError("world: sensing_radius must be > 0");
  if (c.uav_speed < 0.0) throw ValidationError("world: uav_speed must be >= 0");
  if (c.target_speed < 0.0) throw ValidationError("world: target_speed must be >= 0");
  if (c.n_uavs < 0) throw ValidationError("world: n_uavs must be >= 0");
  if (c.n_targets < 0) throw ValidationError("world: n_targets must be >= 0");
}

struct UavState {
  int id = -1;
  Vec2 position{};
  double heading = 0.0;  // radians
  double speed = 0.0;    // m/s

  friend bool operator==(const UavState&, const UavState&) = default;
};

struct TargetState {
  int id = -1;
  Vec2 position{};
  Vec2 waypoint{};
  double speed = 0.0;
  bool detected = false;
  std::optional<double> detect_time;

  friend bool operator==(const TargetState&, const TargetState&) = default;
};

// Boolean-with-timestamp coverage grid. last_covered holds the most recent
// time a UAV footprint contained the cell center, -1 when never covered.
struct CoverageGrid {
  GridFrame frame{};
  std::vector<double> last_covered;
  int covered_cells = 0;

  CoverageGrid() = default;
  explicit CoverageGrid(const GridFrame& f)
      : frame(f), last_covered(static_cast<std::size_t>(f.size()), -1.0) {}

  void mark_disc(Vec2 center, double radius, double t) {
    const double r2 = radius * radius;
    const int row0 = std::max(0, static_cast<int>((center.y - radius - frame.region.lo.y) / frame.cell_size));
    const int row1 = std::min(frame.rows - 1,
                              static_cast<int>((center.y + radius - frame.region.lo.y) / frame.cell_size));
    const int col0 = std::max(0, static_cast<int>((center.x - radius - frame.region.lo.x) / frame.cell_size));
    const int col1 = std::min(frame.cols - 1,
                              static_cast<int>((center.x + radius - frame.region.lo.x) / frame.cell_size));
    for (int row = row0; row <= row1; ++row) {
      const double cy = frame.region.lo.y + (row + 0.5) * frame.cell_size;
      for (int col = col0; col <= col1; ++col) {
        const double cx = frame.region.lo.x + (col + 0.5) * frame.cell_size;
        const double dx = cx - center.x, dy = cy - center.y;
        if (dx * dx + dy * dy <= r2) {
          double& last = last_covered[static_cast<std::size_t>(frame.index(row, col))];
          if (last < 0.0) ++covered_cells;
          last = t;
        }
      }
    }
  }

  // Recount from the raw grid; covered_cells must always equal this.
  int recount() const {
    int n = 0;
    for (double t : last_covered)
      if (t >= 0.0) ++n;
    return n;
  }

  double covered_fraction() const {
    return frame.size() > 0 ? static_cast<double>(covered_cells) / frame.size() : 0.0;
  }

  friend bool operator==(const CoverageGrid&, const CoverageGrid&) = default;
};

struct WorldState {
  WorldConfig config;
  double clock = 0.0;
  std::vector<UavState> uavs;
  std::vector<TargetState> targets;
  CoverageGrid coverage;
  Rng rng;

  Rect extent() const { return {{0.0, 0.0}, {config.extent_x, config.extent_y}}; }

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

namespace detail {

// Reflect a coordinate into [0, hi], flipping direction on each bounce.
inline void reflect_axis(double& p, double& dir_sign, double hi) {
  while (p < 0.0 || p > hi) {
    if (p < 0.0) {
      p = -p;
      dir_sign = -dir_sign;
    } else {
      p = 2.0 * hi - p;
      dir_sign = -dir_sign;
    }
  }
}

inline void mark_all_footprints(WorldState& w) {
  for (const auto& uav : w.uavs)
    w.coverage.mark_disc(uav.position, w.config.sensing_radius, w.clock);
}

}  // namespace detail

// Fully seeded construction: UAV poses, target poses and first waypoints come
// from the config seed in a fixed draw order, so (config, seed) determines the
// whole trajectory.
inline WorldState make_world(const WorldConfig& cfg) {
  validate(cfg);
  WorldState w;
  w.config = cfg;
  w.rng = Rng(cfg.seed);
  w.coverage = CoverageGrid(GridFrame(w.extent(), cfg.cell_size));
  w.uavs.reserve(static_cast<std::size_t>(cfg.n_uavs));
  for (int i = 0; i < cfg.n_uavs; ++i) {
    UavState u;
    u.id = i;
    u.position = {w.rng.uniform(0.0, cfg.extent_x), w.rng.uniform(0.0, cfg.extent_y)};
    u.heading = w.rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    u.speed = cfg.uav_speed;
    w.uavs.push_back(u);
  }
  w.targets.reserve(static_cast<std::size_t>(cfg.n_targets));
  for (int i = 0; i < cfg.n_targets; ++i) {
    TargetState t;
    t.id = i;
    t.position = {w.rng.uniform(0.0, cfg.extent_x), w.rng.uniform(0.0, cfg.extent_y)};
    t.waypoint = {w.rng.uniform(0.0, cfg.extent_x), w.rng.uniform(0.0, cfg.extent_y)};
    t.speed = cfg.target_speed;
    w.targets.push_back(t);
  }
  detail::mark_all_footprints(w);
  return w;
}

// One tick: UAVs move along commanded headings with boundary reflection,
// targets follow random waypoints, the clock advances, footprints are marked.
inline void advance_world(WorldState& w) {
  const double dt = w.config.tick;
  for (auto& uav : w.uavs) {
    double cx = std::cos(uav.heading), cy = std::sin(uav.heading);
    double nx = uav.position.x + uav.speed * dt * cx;
    double ny = uav.position.y + uav.speed * dt * cy;
    detail::reflect_axis(nx, cx, w.config.extent_x);
    detail::reflect_axis(ny, cy, w.config.extent_y);
    uav.position = {nx, ny};
    uav.heading = normalize_angle(std::atan2(cy, cx));
  }
  for (auto& tgt : w.targets) {
    const double step = tgt.speed * dt;
    const double d = distance(tgt.position, tgt.waypoint);
    if (d <= step) {
      tgt.position = tgt.waypoint;
      tgt.waypoint = {w.rng.uniform(0.0, w.config.extent_x),
                      w.rng.uniform(0.0, w.config.extent_y)};
    } else if (d > 0.0) {
      tgt.position = tgt.position + (tgt.waypoint - tgt.position) * (step / d);
    }
  }
  w.clock += dt;
  detail::mark_all_footprints(w);
}

struct TargetObservation {
  int target_id = -1;
  Vec2 position{};
  double time = 0.0;
};

struct SenseResult {
  std::vector<TargetObservation> targets;
  std::vector<std::int32_t> covered_cells;  // cells inside the footprint this tick
};

// Noiseless geometric sensing: every target within the closed sensing ball is
// observed; footprint cells are returned as negative information.
inline SenseResult sense(const UavState& uav, const WorldState& w) {
  SenseResult res;
  const double r = w.config.sensing_radius;
  const double r2 = r * r;
  for (const auto& tgt : w.targets) {
    if (distance_sq(uav.position, tgt.position) <= r2)
      res.targets.push_back({tgt.id, tgt.position, w.clock});
  }
  const GridFrame& f = w.coverage.frame;
  const int row0 = std::max(0, static_cast<int>((uav.position.y - r - f.region.lo.y) / f.cell_size));
  const int row1 = std::min(f.rows - 1, static_cast<int>((uav.position.y + r - f.region.lo.y) / f.cell_size));
  const int col0 = std::max(0, static_cast<int>((uav.position.x - r - f.region.lo.x) / f.cell_size));
  const int col1 = std::min(f.cols - 1, static_cast<int>((uav.position.x + r - f.region.lo.x) / f.cell_size));
  for (int row = row0; row <= row1; ++row) {
    for (int col = col0; col <= col1; ++col) {
      const int idx = f.index(row, col);
      if (distance_sq(f.center(idx), uav.position) <= r2)
        res.covered_cells.push_back(static_cast<std::int32_t>(idx));
    }
  }
  return res;
}

}  // namespace hooda::sim
