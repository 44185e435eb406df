#include "locfade/geometry.hpp"

#include <limits>

#include "locfade/errors.hpp"

namespace locfade {

Box inflated_hull(std::span<const Point> anchors, double inflate, int dimension) {
  if (anchors.empty()) {
    throw DomainError("inflated_hull: no anchors");
  }
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-lo.x, -lo.y};
  for (const auto& p : anchors) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double pad_x = 0.5 * inflate * (hi.x - lo.x);
  lo.x -= pad_x;
  hi.x += pad_x;
  if (dimension == 1) {
    lo.y = hi.y = 0.0;
  } else {
    const double pad_y = 0.5 * inflate * (hi.y - lo.y);
    lo.y -= pad_y;
    hi.y += pad_y;
  }
  return {lo, hi};
}

}  // namespace locfade
