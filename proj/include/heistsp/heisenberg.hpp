#pragma once

// Heisenberg group arithmetic in exponential coordinates with the product
//   (x,y,z)·(x',y',z') = (x+x', y+y', z+z' + 2(xy' - x'y))
// and the Koranyi gauge N(x,y,z) = ((x²+y²)² + z²)^{1/4}.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace heistsp {

/// A point of ℝ².
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Element (x, y, z) of the Heisenberg group. Coordinates are always finite.
class HeisPoint {
 public:
  constexpr HeisPoint() = default;
  HeisPoint(double x, double y, double z) : x_(x), y_(y), z_(z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw std::invalid_argument("HeisPoint: non-finite coordinate");
    }
  }

  [[nodiscard]] double x() const noexcept { return x_; }
  [[nodiscard]] double y() const noexcept { return y_; }
  [[nodiscard]] double z() const noexcept { return z_; }

  friend bool operator==(const HeisPoint&, const HeisPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Dilation factor λ > 0.
class ScaleFactor {
 public:
  explicit ScaleFactor(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("ScaleFactor: lambda must be finite and > 0, got " +
                                  std::to_string(lambda));
    }
  }
  [[nodiscard]] double value() const noexcept { return lambda_; }

 private:
  double lambda_;
};

inline HeisPoint group_mul(const HeisPoint& a, const HeisPoint& b) {
  return {a.x() + b.x(), a.y() + b.y(),
          a.z() + b.z() + 2.0 * (a.x() * b.y() - b.x() * a.y())};
}

inline HeisPoint operator*(const HeisPoint& a, const HeisPoint& b) { return group_mul(a, b); }

inline HeisPoint group_inv(const HeisPoint& a) { return {-a.x(), -a.y(), -a.z()}; }

/// a⁻¹·b, evaluated directly to avoid the intermediate negation.
inline HeisPoint relative(const HeisPoint& a, const HeisPoint& b) {
  return {b.x() - a.x(), b.y() - a.y(),
          b.z() - a.z() - 2.0 * (a.x() * b.y() - b.x() * a.y())};
}

inline double koranyi_norm(const HeisPoint& a) {
  const double r2 = a.x() * a.x() + a.y() * a.y();
  return std::sqrt(std::sqrt(r2 * r2 + a.z() * a.z()));
}

/// Fourth power of the Koranyi norm; avoids the two square roots.
inline double koranyi_norm4(const HeisPoint& a) {
  const double r2 = a.x() * a.x() + a.y() * a.y();
  return r2 * r2 + a.z() * a.z();
}

inline double dist(const HeisPoint& a, const HeisPoint& b) { return koranyi_norm(relative(a, b)); }

/// Two-sided enclosure of the Carnot-Carathéodory distance: d ≤ d_cc ≤ 2d.
struct DistanceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

inline DistanceInterval cc_dist_bounds(const HeisPoint& a, const HeisPoint& b) {
  const double d = dist(a, b);
  return {d, 2.0 * d};
}

inline HeisPoint dilate(ScaleFactor lambda, const HeisPoint& a) {
  const double l = lambda.value();
  return {l * a.x(), l * a.y(), l * l * a.z()};
}

/// Rotation of the horizontal coordinates about the z-axis; an isometric automorphism.
inline HeisPoint rotate_z(double theta, const HeisPoint& a) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * a.x() - s * a.y(), s * a.x() + c * a.y(), a.z()};
}

/// Homomorphic projection onto the horizontal plane.
inline Vec2 proj_pi(const HeisPoint& a) { return {a.x(), a.y()}; }

/// (x, y, z) ↦ (x, y, 0). Not a homomorphism.
inline HeisPoint proj_pi_tilde(const HeisPoint& a) { return {a.x(), a.y(), 0.0}; }

/// Distance from g to the horizontal element below it; equals |z|^{1/2}.
inline double nh(const HeisPoint& a) { return std::sqrt(std::abs(a.z())); }

/// Signed algebraic area swept between π(a) and π(b) by any horizontal path,
/// closed by the chord back to π(a); counter-clockwise positive.
/// Normalised so that nh(a⁻¹b) = 2·|sigma(a,b)|^{1/2}.
inline double sigma(const HeisPoint& a, const HeisPoint& b) { return relative(a, b).z() / 4.0; }

}  // namespace heistsp
