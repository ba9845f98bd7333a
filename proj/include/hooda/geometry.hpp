#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

namespace hooda {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline double distance_sq(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Axis-aligned rectangle, closed on the low edge, open on the high edge for
// point membership so adjacent tiles do not double-own boundary points.
struct Rect {
  Vec2 lo{};
  Vec2 hi{};

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5}; }

  bool contains(Vec2 p) const { return p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y; }

  // Closed membership, for the extent boundary where there is no neighbour tile.
  bool contains_closed(Vec2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect rect_union(const Rect& a, const Rect& b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
          {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

// Uniform cell grid over a rectangle. Row-major indexing, cell centers at
// lo + (col + 0.5, row + 0.5) * cell_size. Shared by coverage accounting and
// situation maps so cell indices line up between them when frames match.
struct GridFrame {
  Rect region{};
  double cell_size = 1.0;
  int rows = 0;
  int cols = 0;

  GridFrame() = default;
  GridFrame(const Rect& r, double cell)
      : region(r),
        cell_size(cell),
        rows(static_cast<int>(std::ceil(r.height() / cell - 1e-9))),
        cols(static_cast<int>(std::ceil(r.width() / cell - 1e-9))) {}

  int size() const { return rows * cols; }
  int index(int row, int col) const { return row * cols + col; }
  int row_of(int idx) const { return idx / cols; }
  int col_of(int idx) const { return idx % cols; }

  Vec2 center(int idx) const {
    return {region.lo.x + (col_of(idx) + 0.5) * cell_size,
            region.lo.y + (row_of(idx) + 0.5) * cell_size};
  }

  std::optional<int> cell_containing(Vec2 p) const {
    if (!region.contains_closed(p)) return std::nullopt;
    int col = std::min(cols - 1, std::max(0, static_cast<int>((p.x - region.lo.x) / cell_size)));
    int row = std::min(rows - 1, std::max(0, static_cast<int>((p.y - region.lo.y) / cell_size)));
    if (rows == 0 || cols == 0) return std::nullopt;
    return index(row, col);
  }

  friend bool operator==(const GridFrame&, const GridFrame&) = default;
};

inline double normalize_angle(double a) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

}  // namespace hooda
