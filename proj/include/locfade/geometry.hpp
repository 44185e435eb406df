#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace locfade {

/// Position in metres. 1-D scenes use x only and keep y at zero.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned search region.
struct Box {
  Point lo;
  Point hi;

  double width() const { return std::max(hi.x - lo.x, hi.y - lo.y); }
};

/// Anchor hull bounding box with each side pushed out by `inflate / 2` of
/// its extent. In 1-D the y extent stays degenerate at zero.
Box inflated_hull(std::span<const Point> anchors, double inflate, int dimension);

}  // namespace locfade
