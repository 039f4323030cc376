#pragma once

// Horizontal lines {g·δ_t(h) : t ∈ ℝ}, h horizontal.
//
// Canonical representation (theta, offset, height): after rotate_z(-theta) the
// line is exactly {(t, offset, height - 2·offset·t) : t ∈ ℝ}, i.e. the left
// translate of the x-axis by (0, offset, height). theta lives in [0, π);
// reversing the direction negates offset and the parameter but not height.
//
// Sign conventions for the line-relative area: trapezoid_area follows the
// path π(a) → π(b) → π(b_L) → π(a_L) → π(a) and is counter-clockwise
// positive, matching sigma().

#include <cmath>
#include <numbers>

#include "heistsp/heisenberg.hpp"
#include "heistsp/optimize.hpp"

namespace heistsp {

class HorizontalLine {
 public:
  /// The x-axis.
  HorizontalLine() = default;

  /// Builds the canonical line; theta is reduced to [0, π).
  static HorizontalLine canonical(double theta, double offset, double height) {
    HorizontalLine l;
    double t = std::fmod(theta, 2.0 * std::numbers::pi);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    if (t >= std::numbers::pi) {
      t -= std::numbers::pi;
      offset = -offset;
    }
    if (t >= std::numbers::pi || t < 0.0) t = 0.0;
    l.theta_ = t;
    l.offset_ = offset;
    l.height_ = height;
    return l;
  }

  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double offset() const noexcept { return offset_; }
  [[nodiscard]] double height() const noexcept { return height_; }

  /// Unit direction of π(L).
  [[nodiscard]] Vec2 direction() const { return {std::cos(theta_), std::sin(theta_)}; }
  /// Unit normal of π(L); offset is measured along it.
  [[nodiscard]] Vec2 normal() const { return {-std::sin(theta_), std::cos(theta_)}; }

 private:
  double theta_ = 0.0;
  double offset_ = 0.0;
  double height_ = 0.0;
};

inline bool approx_equal(const HorizontalLine& a, const HorizontalLine& b, double tol = 1e-12) {
  return std::abs(a.theta() - b.theta()) <= tol && std::abs(a.offset() - b.offset()) <= tol &&
         std::abs(a.height() - b.height()) <= tol;
}

/// Coordinates of p in the frame where L is the left translate of the x-axis.
inline HeisPoint to_line_frame(const HeisPoint& p, const HorizontalLine& L) {
  return rotate_z(-L.theta(), p);
}

inline HeisPoint line_point_at(const HorizontalLine& L, double t) {
  const HeisPoint local{t, L.offset(), L.height() - 2.0 * L.offset() * t};
  return L.theta() == 0.0 ? local : rotate_z(L.theta(), local);
}

/// The horizontal line through g whose projection has direction angle theta.
inline HorizontalLine line_from_point_direction(const HeisPoint& g, double theta) {
  const HorizontalLine dir = HorizontalLine::canonical(theta, 0.0, 0.0);
  const HeisPoint local = to_line_frame(g, dir);
  const double offset = local.y();
  return HorizontalLine::canonical(dir.theta(), offset, local.z() + 2.0 * offset * local.x());
}

/// Parameter t such that line_point_at(L, t) is the point of L above π(p)'s
/// perpendicular foot.
inline double line_param(const HeisPoint& p, const HorizontalLine& L) {
  return to_line_frame(p, L).x();
}

struct LineFoot {
  HeisPoint p_L;    ///< co-horizontal with p, projecting onto π(L) perpendicularly
  HeisPoint P_L;    ///< the point of L vertically aligned with p_L
  double param = 0.0;  ///< P_L under the isometry L ≅ ℝ
};

inline LineFoot foot(const HeisPoint& p, const HorizontalLine& L) {
  const HeisPoint q = to_line_frame(p, L);
  const double o = L.offset();
  const double t = q.x();
  const HeisPoint pl_local{t, o, q.z() - 2.0 * t * (q.y() - o)};
  const double th = L.theta();
  const HeisPoint pl = th == 0.0 ? pl_local : rotate_z(th, pl_local);
  // π(p) ∈ π(L) is the identity case.
  return {q.y() == o ? p : pl, line_point_at(L, t), t};
}

namespace detail {

/// P_L(p)⁻¹·p = (0, Y, Z) in the line frame.
struct LineResidual {
  double Y = 0.0;
  double Z = 0.0;
};

inline LineResidual line_residual(const HeisPoint& p, const HorizontalLine& L) {
  const HeisPoint q = to_line_frame(p, L);
  const double o = L.offset();
  return {q.y() - o, q.z() - L.height() + 4.0 * o * q.x() - 2.0 * q.x() * q.y()};
}

/// f(s) = (s² + Y²)² + (Z − 2sY)²: fourth power of the distance from p to the
/// line point s units past P_L(p).
inline double residual_quartic(const LineResidual& r, double s) {
  const double a = s * s + r.Y * r.Y;
  const double b = r.Z - 2.0 * s * r.Y;
  return a * a + b * b;
}

/// Unique real root of f'(s)/4 = s³ + 3Y²s − YZ (strictly increasing cubic).
inline double residual_argmin(const LineResidual& r) {
  if (r.Y == 0.0) return 0.0;
  const double p = 3.0 * r.Y * r.Y;
  const double q = -r.Y * r.Z;
  const double w = -q / 2.0;
  const double disc = std::sqrt(w * w + (p / 3.0) * (p / 3.0) * (p / 3.0));
  const double A = std::cbrt(w + std::copysign(disc, w));
  double s = A == 0.0 ? 0.0 : A - p / (3.0 * A);
  for (int i = 0; i < 2; ++i) {
    const double g = s * s * s + p * s + q;
    const double dg = 3.0 * s * s + p;
    if (dg > 0.0) s -= g / dg;
  }
  return s;
}

}  // namespace detail

/// d(p, L) = min over t of d(p, line_point_at(L, t)); exact via the cubic
/// critical-point equation, golden-section fallback if that is non-finite.
inline double line_dist(const HeisPoint& p, const HorizontalLine& L) {
  const auto r = detail::line_residual(p, L);
  const double s = detail::residual_argmin(r);
  double f = detail::residual_quartic(r, s);
  if (!std::isfinite(f)) {
    const double bound = 4.0 * (std::sqrt(std::sqrt(r.Y * r.Y * r.Y * r.Y + r.Z * r.Z)) + 1.0);
    f = opt::golden_section([&](double t) { return detail::residual_quartic(r, t); }, -bound,
                            bound, 1e-14 * bound)
            .value;
  }
  return std::sqrt(std::sqrt(std::max(f, 0.0)));
}

/// Signed shoelace area of π(a) → π(b) → π(b_L) → π(a_L) → π(a).
inline double trapezoid_area(const HeisPoint& a, const HeisPoint& b, const HorizontalLine& L) {
  const Vec2 pa = proj_pi(a);
  const Vec2 pb = proj_pi(b);
  const Vec2 pbl = proj_pi(foot(b, L).P_L);
  const Vec2 pal = proj_pi(foot(a, L).P_L);
  return 0.5 * (cross(pa, pb) + cross(pb, pbl) + cross(pbl, pal) + cross(pal, pa));
}

/// Line-relative area Σ^L_{a,b} = Σ_{a,b} + trapezoid; additive in (a, b).
inline double sigma_L(const HeisPoint& a, const HeisPoint& b, const HorizontalLine& L) {
  return sigma(a, b) + trapezoid_area(a, b, L);
}

}  // namespace heistsp
