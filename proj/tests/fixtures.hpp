#pragma once

// Shared point sets and curves for the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "heistsp/heistsp.hpp"

namespace fixtures {

using heistsp::HeisPoint;

inline std::vector<HeisPoint> segment_x(std::size_t n, double len = 1.0) {
  std::vector<HeisPoint> E;
  for (std::size_t i = 0; i < n; ++i) E.emplace_back(len * static_cast<double>(i) / static_cast<double>(n - 1), 0.0, 0.0);
  return E;
}

/// n points along an arbitrary horizontal line, at parameters in [t0, t1].
inline std::vector<HeisPoint> on_line(const heistsp::HorizontalLine& L, std::size_t n, double t0, double t1) {
  std::vector<HeisPoint> E;
  for (std::size_t i = 0; i < n; ++i) {
    E.push_back(heistsp::line_point_at(L, t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  return E;
}

/// A smooth curve whose z-coordinate is the horizontal lift of its planar shadow.
struct LiftCurve {
  std::string name;
  std::function<HeisPoint(double)> at;
  double t0;
  double t1;
};

inline std::vector<LiftCurve> smooth_lifts() {
  const double pi = std::numbers::pi;
  return {
      {"circle-arc",
       [](double t) { return HeisPoint(std::cos(t) - 1.0, std::sin(t), 2.0 * (t - std::sin(t))); }, 0.0,
       0.9 * 2.0 * pi},
      {"parabola", [](double t) { return HeisPoint(t, t * t, 2.0 * t * t * t / 3.0); }, -1.0, 1.0},
      {"sine",
       [pi](double t) {
         return HeisPoint(t, 0.5 * std::sin(pi * t), t * std::sin(pi * t) + 2.0 * std::cos(pi * t) / pi - 2.0 / pi);
       },
       0.0, 2.0},
  };
}

/// Stratified parameter samples; seed 0 gives the uniform grid.
inline std::vector<HeisPoint> sample_lift(const LiftCurve& c, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  std::vector<HeisPoint> E;
  for (std::size_t i = 0; i < n; ++i) {
    double s = static_cast<double>(i) + 0.5;
    if (seed != 0) s += u(rng);
    E.push_back(c.at(c.t0 + (c.t1 - c.t0) * s / static_cast<double>(n)));
  }
  return E;
}

/// Unit-length polygon with one right-angle corner; both edges horizontal.
inline heistsp::PolygonalCurve corner_curve() {
  return heistsp::PolygonalCurve({HeisPoint(-0.5, 0.0, 0.0), HeisPoint(0.0, 0.0, 0.0), HeisPoint(0.0, 0.5, 0.0)});
}

inline std::vector<HeisPoint> intro_triple(double eps) {
  return {HeisPoint(-1.0, 0.0, 0.0), HeisPoint(0.0, 0.0, eps), HeisPoint(1.0, 0.0, 0.0)};
}

/// Dense x-axis samples with a hole around the origin and one point lifted
/// above it. The hole keeps small balls at the lifted point free of axis points.
inline std::vector<HeisPoint> lifted_point_set(double lift = 0.01, double hole = 0.3) {
  std::vector<HeisPoint> E;
  for (int i = -200; i <= 200; ++i) {
    const double x = 0.02 * i;
    if (std::abs(x) < hole - 1e-12) continue;
    E.emplace_back(x, 0.0, 0.0);
  }
  E.emplace_back(0.0, 0.0, lift);
  return E;
}

inline std::vector<HeisPoint> uniform_in_ball(const heistsp::Ball& B, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<HeisPoint> E;
  const double r = B.radius();
  while (E.size() < n) {
    const HeisPoint q(r * u(rng), r * u(rng), r * r * u(rng));
    const HeisPoint p = B.center() * q;
    if (B.contains(p)) E.push_back(p);
  }
  return E;
}

}  // namespace fixtures
