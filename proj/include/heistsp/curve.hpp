#pragma once

// Polygonal curves in ℍ.
//
// An edge from a to b is the one-parameter path s ↦ a·(s·(a⁻¹b)), s ∈ [0,1].
// In exponential coordinates this is the straight ℝ³ segment from a to b, so
// an edge between two points of a Koranyi ball stays inside it (Koranyi balls
// are convex in ℝ³). Curve length is the sum of Koranyi edge distances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "heistsp/heisenberg.hpp"
#include "heistsp/optimize.hpp"

namespace heistsp {

class PolygonalCurve {
 public:
  PolygonalCurve() = default;
  explicit PolygonalCurve(std::vector<HeisPoint> vertices) : vertices_(std::move(vertices)) {}

  [[nodiscard]] const std::vector<HeisPoint>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept {
    return vertices_.empty() ? 0 : vertices_.size() - 1;
  }
  void append(const HeisPoint& p) { vertices_.push_back(p); }

  /// Σ d(v_i, v_{i+1}).
  [[nodiscard]] double length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i) total += dist(vertices_[i - 1], vertices_[i]);
    return total;
  }

 private:
  std::vector<HeisPoint> vertices_;
};

inline double curve_length(const PolygonalCurve& c) { return c.length(); }

/// Point at parameter s ∈ [0,1] of the edge from a to b.
inline HeisPoint edge_point(const HeisPoint& a, const HeisPoint& b, double s) {
  return {a.x() + s * (b.x() - a.x()), a.y() + s * (b.y() - a.y()), a.z() + s * (b.z() - a.z())};
}

/// Koranyi distance from p to the edge [a, b]. d⁴ is convex along the edge.
inline double dist_to_edge(const HeisPoint& p, const HeisPoint& a, const HeisPoint& b) {
  const auto m = opt::golden_section(
      [&](double s) { return koranyi_norm4(relative(p, edge_point(a, b, s))); }, 0.0, 1.0, 1e-13);
  const double ends = std::min(koranyi_norm4(relative(p, a)), koranyi_norm4(relative(p, b)));
  return std::sqrt(std::sqrt(std::min(m.value, ends)));
}

/// Samples of a curve at roughly `density` points per unit Koranyi length.
/// Vertices are always included. With seed != 0 the interior samples are
/// jittered within their stratum, deterministically in the seed.
inline std::vector<HeisPoint> sample_curve(const PolygonalCurve& curve, double density,
                                           std::uint64_t seed = 0) {
  std::vector<HeisPoint> out;
  const auto& v = curve.vertices();
  if (v.empty()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  out.push_back(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double len = dist(v[i - 1], v[i]);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(density * len)));
    for (std::size_t j = 1; j < pieces; ++j) {
      const double u = seed == 0 ? 0.0 : unit(rng) - 0.5;
      const double s = (static_cast<double>(j) + 0.5 * u) / static_cast<double>(pieces);
      out.push_back(edge_point(v[i - 1], v[i], s));
    }
    out.push_back(v[i]);
  }
  return out;
}

}  // namespace heistsp
