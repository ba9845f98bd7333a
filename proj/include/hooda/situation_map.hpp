#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/geometry.hpp"

namespace hooda::net {

enum class Granularity : std::uint8_t { Local = 0, Regional = 1, Global = 2 };

constexpr int granularity_rank(Granularity g) { return static_cast<int>(g); }

inline const char* to_string(Granularity g) {
  switch (g) {
    case Granularity::Local: return "local";
    case Granularity::Regional: return "regional";
    case Granularity::Global: return "global";
  }
  return "?";
}

struct MapCell {
  double value = 0.0;       // scalar field sample (target probability, load, ...)
  double confidence = 0.0;  // in [0, 1]
  double timestamp = 0.0;   // simulation seconds of the last contributing observation

  friend bool operator==(const MapCell&, const MapCell&) = default;
};

// Gridded scalar field with per-cell confidence and timestamp. A map covers a
// rectangular region of the world at one of three granularities; fragments
// (small dirty-region maps) use the same type.
class SituationMap {
public:
  SituationMap() = default;
  SituationMap(Granularity g, const Rect& region, double cell_size,
               double initial_value = 0.0, double initial_confidence = 0.0,
               double initial_timestamp = 0.0)
      : granularity_(g), frame_(region, cell_size) {
    cells_.assign(static_cast<std::size_t>(frame_.size()),
                  MapCell{initial_value, initial_confidence, initial_timestamp});
  }

  Granularity granularity() const { return granularity_; }
  void set_granularity(Granularity g) { granularity_ = g; }
  const GridFrame& frame() const { return frame_; }
  const Rect& region() const { return frame_.region; }
  double cell_size() const { return frame_.cell_size; }
  int rows() const { return frame_.rows; }
  int cols() const { return frame_.cols; }
  int size() const { return frame_.size(); }
  bool empty() const { return cells_.empty(); }

  MapCell& at(int idx) { return cells_[static_cast<std::size_t>(idx)]; }
  const MapCell& at(int idx) const { return cells_[static_cast<std::size_t>(idx)]; }
  std::span<const MapCell> cells() const { return cells_; }
  std::span<MapCell> cells() { return cells_; }

  Vec2 center(int idx) const { return frame_.center(idx); }
  std::optional<int> cell_containing(Vec2 p) const { return frame_.cell_containing(p); }

  // Number of cells carrying any information; reports are sized by this.
  int occupied_cells() const {
    int n = 0;
    for (const auto& c : cells_)
      if (c.confidence > 0.0) ++n;
    return n;
  }

  double max_timestamp() const {
    double t = 0.0;
    for (const auto& c : cells_) t = std::max(t, c.timestamp);
    return t;
  }

  // Per-cell newest-observation-wins merge of an overlapping fragment.
  // Used when a belief is updated from a stream of partial maps.
  void ingest(const SituationMap& fragment) {
    for (int i = 0; i < fragment.size(); ++i) {
      const MapCell& f = fragment.at(i);
      if (f.confidence <= 0.0) continue;
      auto idx = frame_.cell_containing(fragment.center(i));
      if (!idx) continue;
      MapCell& mine = cells_[static_cast<std::size_t>(*idx)];
      if (f.timestamp >= mine.timestamp) mine = f;
    }
  }

  // Copies every cell updated after `since` into a compact fragment covering
  // the dirty bounding box. Returns an empty map when nothing changed.
  SituationMap fragment_since(double since) const {
    int r0 = frame_.rows, r1 = -1, c0 = frame_.cols, c1 = -1;
    for (int i = 0; i < size(); ++i) {
      const MapCell& c = cells_[static_cast<std::size_t>(i)];
      if (c.confidence > 0.0 && c.timestamp > since) {
        r0 = std::min(r0, frame_.row_of(i));
        r1 = std::max(r1, frame_.row_of(i));
        c0 = std::min(c0, frame_.col_of(i));
        c1 = std::max(c1, frame_.col_of(i));
      }
    }
    if (r1 < r0) return SituationMap{};
    Rect box{{frame_.region.lo.x + c0 * frame_.cell_size, frame_.region.lo.y + r0 * frame_.cell_size},
             {frame_.region.lo.x + (c1 + 1) * frame_.cell_size,
              frame_.region.lo.y + (r1 + 1) * frame_.cell_size}};
    SituationMap frag(granularity_, box, frame_.cell_size);
    for (int i = 0; i < frag.size(); ++i) {
      auto src = frame_.cell_containing(frag.center(i));
      if (!src) continue;
      const MapCell& c = cells_[static_cast<std::size_t>(*src)];
      if (c.confidence > 0.0 && c.timestamp > since) frag.at(i) = c;
    }
    return frag;
  }

  // Expected mass with low-confidence cells blended toward a prior value:
  // sum over cells of conf*value + (1-conf)*prior.
  double blended_mass(double prior_value) const {
    double m = 0.0;
    for (const auto& c : cells_) m += c.confidence * c.value + (1.0 - c.confidence) * prior_value;
    return m;
  }

  double blended_mass_in(const Rect& rect, double prior_value) const {
    double m = 0.0;
    for (int i = 0; i < size(); ++i) {
      if (!rect.contains(center(i))) continue;
      const MapCell& c = cells_[static_cast<std::size_t>(i)];
      m += c.confidence * c.value + (1.0 - c.confidence) * prior_value;
    }
    return m;
  }

  // Target-search maps hold a sub-probability distribution over cells.
  bool is_subprobability(double tol = 1e-9) const {
    double sum = 0.0;
    for (const auto& c : cells_) {
      if (c.value < -tol) return false;
      sum += c.value;
    }
    return sum <= 1.0 + tol;
  }

  friend bool operator==(const SituationMap&, const SituationMap&) = default;

private:
  Granularity granularity_ = Granularity::Local;
  GridFrame frame_{};
  std::vector<MapCell> cells_;
};

struct FuseOptions {
  // Per-second confidence decay applied to prior cells not covered by any child.
  double staleness_lambda = 0.99;
  // Fusion time; defaults to the newest child timestamp.
  std::optional<double> now;
  // Incumbent map at the target granularity; cells covered by no child keep its
  // value with decayed confidence.
  const SituationMap* prior = nullptr;
};

// Fuses child maps one granularity below `target` onto a fresh grid covering
// `region`. Per covered cell: value is the confidence-weighted mean of child
// values, confidence combines as 1 - prod(1 - c), timestamp is the max.
inline SituationMap fuse_maps(std::span<const SituationMap> children, Granularity target,
                              const Rect& region, double cell_size,
                              const FuseOptions& opt = {}) {
  if (children.empty()) throw ValidationError("fuse_maps: empty child list");
  if (granularity_rank(target) < 1)
    throw ValidationError("fuse_maps: target granularity has no children level");
  for (const auto& c : children) {
    if (granularity_rank(c.granularity()) + 1 != granularity_rank(target))
      throw ValidationError("fuse_maps: child granularity must be one level below target");
  }
  double now = 0.0;
  if (opt.now) {
    now = *opt.now;
  } else {
    for (const auto& c : children) now = std::max(now, c.max_timestamp());
  }

  SituationMap out(target, region, cell_size);
  for (int i = 0; i < out.size(); ++i) {
    const Vec2 p = out.center(i);
    double wsum = 0.0, vsum = 0.0, keep = 1.0, tmax = -std::numeric_limits<double>::infinity();
    bool covered = false;
    for (const auto& child : children) {
      auto idx = child.cell_containing(p);
      if (!idx) continue;
      covered = true;
      const MapCell& c = child.at(*idx);
      wsum += c.confidence;
      vsum += c.confidence * c.value;
      keep *= 1.0 - c.confidence;
      tmax = std::max(tmax, c.timestamp);
    }
    MapCell& cell = out.at(i);
    if (covered) {
      cell.value = wsum > 0.0 ? vsum / wsum : 0.0;
      cell.confidence = 1.0 - keep;
      cell.timestamp = tmax;
    } else if (opt.prior != nullptr) {
      if (auto idx = opt.prior->cell_containing(p)) {
        const MapCell& q = opt.prior->at(*idx);
        const double age = std::max(0.0, now - q.timestamp);
        cell.value = q.value;
        cell.confidence = q.confidence * std::pow(opt.staleness_lambda, age);
        cell.timestamp = q.timestamp;
      }
    }
  }
  return out;
}

// Region defaults to the bounding box of the children, cell size to the first
// child's. Children produced by a tiling partition make the box exact.
inline SituationMap fuse_maps(std::span<const SituationMap> children, Granularity target,
                              const FuseOptions& opt = {}) {
  if (children.empty()) throw ValidationError("fuse_maps: empty child list");
  Rect box = children.front().region();
  for (const auto& c : children) box = rect_union(box, c.region());
  return fuse_maps(children, target, box, children.front().cell_size(), opt);
}

inline SituationMap fuse_global(std::span<const SituationMap> regionals, const Rect& extent,
                                double cell_size, const FuseOptions& opt = {}) {
  return fuse_maps(regionals, Granularity::Global, extent, cell_size, opt);
}

}  // namespace hooda::net
