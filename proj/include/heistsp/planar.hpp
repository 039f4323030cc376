#pragma once

// Planar helpers: convex hull and minimum-width enclosing strip.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "heistsp/heisenberg.hpp"

namespace heistsp::planar {

/// Andrew's monotone chain. Counter-clockwise, no repeated or collinear
/// vertices. Degenerate inputs give 0, 1 or 2 vertices.
inline std::vector<Vec2> convex_hull(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Closed strip {v : |n·v − c| ≤ width/2} with n = (−sin θ, cos θ).
struct Strip {
  double theta = 0.0;   ///< direction angle of the strip's midline
  double offset = 0.0;  ///< n·v on the midline
  double width = 0.0;
};

/// Exact minimum-width strip by rotating calipers over the hull edges.
inline Strip min_width_strip(std::span<const Vec2> points) {
  const std::vector<Vec2> hull = convex_hull(points);
  if (hull.empty()) return {};
  if (hull.size() == 1) return {0.0, hull[0].y, 0.0};
  if (hull.size() == 2) {
    const Vec2 d = hull[1] - hull[0];
    const double theta = std::atan2(d.y, d.x);
    const Vec2 n{-std::sin(theta), std::cos(theta)};
    return {theta, dot(n, hull[0]), 0.0};
  }

  const std::size_t h = hull.size();
  Strip best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  std::size_t far = 1;
  for (std::size_t i = 0; i < h; ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % h];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len == 0.0) continue;
    // Advance the antipodal vertex while it moves away from edge (a, b).
    while (std::abs(cross(e, hull[(far + 1) % h] - a)) > std::abs(cross(e, hull[far] - a))) {
      far = (far + 1) % h;
    }
    const double width = std::abs(cross(e, hull[far] - a)) / len;
    if (width < best.width) {
      const double theta = std::atan2(e.y, e.x);
      const Vec2 n{-std::sin(theta), std::cos(theta)};
      const double c0 = dot(n, a);
      const double c1 = dot(n, hull[far]);
      best = {theta, 0.5 * (c0 + c1), width};
    }
  }
  return best;
}

}  // namespace heistsp::planar
