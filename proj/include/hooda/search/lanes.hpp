#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hooda/geometry.hpp"

namespace hooda::bench {

// Vertical sweep lanes over a rectangular region. A UAV flying a lane's
// centerline with sensing radius r covers the lane when the width is at most
// 2r; the overlap factor shrinks lanes slightly so adjacent passes overlap.
struct LaneGrid {
  Rect region{};
  double lane_width = 1.0;
  int count = 0;

  LaneGrid() = default;
  LaneGrid(const Rect& r, double sensing_radius, double overlap_factor) : region(r) {
    const double swath = 2.0 * sensing_radius * overlap_factor;
    count = std::max(1, static_cast<int>(std::ceil(r.width() / swath - 1e-9)));
    lane_width = r.width() / count;
  }

  double center_x(int lane) const { return region.lo.x + (lane + 0.5) * lane_width; }

  Rect lane_rect(int lane) const {
    return {{region.lo.x + lane * lane_width, region.lo.y},
            {region.lo.x + (lane + 1) * lane_width, region.hi.y}};
  }

  // Sweep endpoints, pulled in by the margin so the footprint still reaches
  // the region boundary.
  Vec2 low_end(int lane, double margin) const { return {center_x(lane), region.lo.y + margin}; }
  Vec2 high_end(int lane, double margin) const { return {center_x(lane), region.hi.y - margin}; }
};

// Splits `lanes` (already filtered to the not-yet-done ones) into contiguous
// blocks, one per member, balanced within one lane. Members order is the
// caller's; blocks are dealt in that order.
inline std::vector<std::vector<int>> deal_lane_blocks(const std::vector<int>& lanes,
                                                      std::size_t n_members) {
  std::vector<std::vector<int>> blocks(n_members);
  if (n_members == 0) return blocks;
  const std::size_t base = lanes.size() / n_members;
  std::size_t extra = lanes.size() % n_members;
  std::size_t at = 0;
  for (std::size_t m = 0; m < n_members; ++m) {
    std::size_t take = base + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
    for (std::size_t k = 0; k < take && at < lanes.size(); ++k) blocks[m].push_back(lanes[at++]);
  }
  return blocks;
}

}  // namespace hooda::bench
