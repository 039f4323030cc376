#pragma once

// β-numbers over horizontal lines.
//
//   β_E(B) = inf_L sup_{x ∈ E∩B} d(x, L) / diam(B)
//
// The infimum is a non-convex minimax problem. beta_heis works in the unit
// frame of the ball (centre translated to 0, radius dilated to 1) so the
// answer is exactly covariant under translations and dilations. It runs a
// multistart (min-width strip midline, lines through pairs of points, the
// x-axis through the centre), polishes each start with Nelder–Mead on
// (theta, offset, height), and re-solves the height exactly: for fixed
// (theta, offset) the objective is quasi-convex in height and its minimiser
// lies between the smallest and largest per-point "zero residual" heights.
//
// Large inputs are handled with an active set: fit a farthest-point subset,
// add the worst violators, refit from the incumbent.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heistsp/heisenberg.hpp"
#include "heistsp/horizontal_line.hpp"
#include "heistsp/optimize.hpp"
#include "heistsp/planar.hpp"

namespace heistsp {

/// Thrown when a computation would exceed its configured cost guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed Koranyi ball.
class Ball {
 public:
  Ball(HeisPoint center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("Ball: radius must be finite and > 0");
    }
  }
  [[nodiscard]] const HeisPoint& center() const noexcept { return center_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] double diam() const noexcept { return 2.0 * radius_; }
  /// c·B: same centre, radius scaled by c.
  [[nodiscard]] Ball scaled(double c) const { return {center_, c * radius_}; }
  /// Closed membership with relative tolerance 1e-12.
  [[nodiscard]] bool contains(const HeisPoint& p) const {
    return dist(center_, p) <= radius_ * (1.0 + 1e-12);
  }

 private:
  HeisPoint center_;
  double radius_;
};

struct BetaBudget {
  int nm_iterations = 200;   ///< Nelder–Mead iterations per start
  int max_starts = 6;        ///< starts polished per active-set round
  int working_set = 24;      ///< initial active-set size
  int max_rounds = 8;        ///< active-set rounds
  int certify_resolution = 0;  ///< > 0: also run the grid oracle and report the gap
};

struct BetaResult {
  double beta = 0.0;
  HorizontalLine line;        ///< argmin witness
  HeisPoint achieving_point;  ///< argmax witness on `line`
  double certified_gap = 0.0;
  bool vacuous = false;       ///< E∩B was empty
  std::size_t contained = 0;  ///< |E∩B|
};

namespace detail {

struct UnitFrame {
  HeisPoint center;
  double radius;

  [[nodiscard]] HeisPoint to_unit(const HeisPoint& p) const {
    return dilate(ScaleFactor(1.0 / radius), relative(center, p));
  }
  [[nodiscard]] HeisPoint from_unit(const HeisPoint& p) const {
    return group_mul(center, dilate(ScaleFactor(radius), p));
  }
  [[nodiscard]] HorizontalLine from_unit(const HorizontalLine& L) const {
    return line_from_point_direction(from_unit(line_point_at(L, 0.0)), L.theta());
  }
};

struct LineParams {
  double theta = 0.0;
  double offset = 0.0;
  double height = 0.0;

  [[nodiscard]] HorizontalLine line() const { return HorizontalLine::canonical(theta, offset, height); }
};

struct Fit {
  LineParams params;
  double value = std::numeric_limits<double>::infinity();  ///< max line_dist (unit frame)
};

inline bool better(const Fit& a, const Fit& b) {
  if (a.value != b.value) return a.value < b.value;
  const LineParams p = a.params;
  const LineParams q = b.params;
  if (p.theta != q.theta) return p.theta < q.theta;
  if (p.offset != q.offset) return p.offset < q.offset;
  return p.height < q.height;
}

inline double max_line_dist(std::span<const HeisPoint> pts, const HorizontalLine& L) {
  double m = 0.0;
  for (const HeisPoint& p : pts) m = std::max(m, line_dist(p, L));
  return m;
}

/// Exact minimax height for fixed (theta, offset).
inline Fit fit_height(std::span<const HeisPoint> pts, double theta, double offset,
                      int iterations = 100) {
  const HorizontalLine dir = HorizontalLine::canonical(theta, offset, 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const HeisPoint& p : pts) {
    const HeisPoint q = to_line_frame(p, dir);
    const double o = dir.offset();
    const double h = q.z() + 4.0 * o * q.x() - 2.0 * q.x() * q.y();
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  auto objective = [&](double h) {
    return max_line_dist(pts, HorizontalLine::canonical(dir.theta(), dir.offset(), h));
  };
  Fit best{{dir.theta(), dir.offset(), 0.5 * (lo + hi)}, objective(0.5 * (lo + hi))};
  if (hi > lo) {
    const auto g = opt::golden_section(objective, lo, hi, 1e-15 * (1.0 + std::abs(hi) + std::abs(lo)),
                                       iterations);
    if (g.value < best.value) best = {{dir.theta(), dir.offset(), g.x}, g.value};
  }
  return best;
}

inline Fit polish(std::span<const HeisPoint> pts, const Fit& start, int iterations) {
  auto objective = [&](const std::array<double, 3>& v) {
    return max_line_dist(pts, HorizontalLine::canonical(v[0], v[1], v[2]));
  };
  const double scale = std::max(start.value, 1e-3);
  const auto nm = opt::nelder_mead<3>(objective, {start.params.theta, start.params.offset, start.params.height},
                                      {0.1 * scale, 0.1 * scale, 0.2 * scale}, iterations);
  Fit out = start;
  if (nm.value < out.value) {
    const HorizontalLine l = HorizontalLine::canonical(nm.x[0], nm.x[1], nm.x[2]);
    out = {{l.theta(), l.offset(), l.height()}, nm.value};
  }
  const Fit refit = fit_height(pts, out.params.theta, out.params.offset);
  if (refit.value < out.value) out = refit;
  return out;
}

/// Farthest-point traversal starting from index 0.
inline std::vector<std::size_t> farthest_subset(std::span<const HeisPoint> pts, std::size_t count) {
  std::vector<std::size_t> chosen;
  if (pts.empty()) return chosen;
  count = std::min(count, pts.size());
  std::vector<double> gap(pts.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (chosen.size() < count) {
    chosen.push_back(next);
    double far = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      gap[i] = std::min(gap[i], dist(pts[next], pts[i]));
      if (gap[i] > far) {
        far = gap[i];
        next = i;
      }
    }
    if (far <= 0.0) break;
  }
  return chosen;
}

inline std::vector<Fit> starting_lines(std::span<const HeisPoint> pts) {
  std::vector<Fit> starts;
  starts.push_back({{0.0, 0.0, 0.0}, max_line_dist(pts, HorizontalLine{})});

  std::vector<Vec2> proj;
  proj.reserve(pts.size());
  for (const HeisPoint& p : pts) proj.push_back(proj_pi(p));
  const planar::Strip strip = planar::min_width_strip(proj);
  starts.push_back(fit_height(pts, strip.theta, strip.offset));

  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Vec2 d = proj[j] - proj[i];
      if (d.x == 0.0 && d.y == 0.0) continue;
      const HorizontalLine l = line_from_point_direction(pts[i], std::atan2(d.y, d.x));
      starts.push_back({{l.theta(), l.offset(), l.height()}, max_line_dist(pts, l)});
    }
  }
  std::sort(starts.begin(), starts.end(), better);
  return starts;
}

inline Fit optimize_lines(std::span<const HeisPoint> pts, std::vector<Fit> starts,
                          const BetaBudget& budget) {
  std::sort(starts.begin(), starts.end(), better);
  Fit best = starts.front();
  int used = 0;
  std::vector<LineParams> seen;
  for (const Fit& s : starts) {
    if (used >= budget.max_starts) break;
    const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const LineParams& q) {
      return std::abs(q.theta - s.params.theta) < 1e-9 && std::abs(q.offset - s.params.offset) < 1e-9 &&
             std::abs(q.height - s.params.height) < 1e-9;
    });
    if (duplicate) continue;
    seen.push_back(s.params);
    ++used;
    Fit f = fit_height(pts, s.params.theta, s.params.offset);
    if (s.value < f.value) f = s;
    f = polish(pts, f, budget.nm_iterations);
    if (better(f, best)) best = f;
  }
  // One restart from the incumbent helps on the non-smooth max objective.
  const Fit again = polish(pts, best, budget.nm_iterations);
  if (better(again, best)) best = again;
  return best;
}

/// Minimax line fit in the unit frame with the active-set scheme.
inline Fit fit_unit_frame(std::span<const HeisPoint> pts, const BetaBudget& budget) {
  const std::size_t initial = static_cast<std::size_t>(std::max(budget.working_set, 2));
  const std::vector<std::size_t> subset = farthest_subset(pts, initial);
  std::vector<bool> active(pts.size(), false);
  std::vector<HeisPoint> working;
  for (std::size_t i : subset) {
    active[i] = true;
    working.push_back(pts[i]);
  }

  Fit best;
  std::vector<Fit> starts = starting_lines(working);
  for (int round = 0; round < std::max(budget.max_rounds, 1); ++round) {
    best = optimize_lines(working, starts, budget);

    const HorizontalLine l = best.params.line();
    std::vector<std::pair<double, std::size_t>> violators;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (active[i]) continue;
      const double d = line_dist(pts[i], l);
      if (d > best.value * (1.0 + 1e-12)) violators.push_back({d, i});
    }
    if (violators.empty()) break;
    std::sort(violators.begin(), violators.end(),
              [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    if (violators.size() > 4) violators.resize(4);
    for (const auto& v : violators) {
      active[v.second] = true;
      working.push_back(pts[v.second]);
    }
    starts = starting_lines(working);
    starts.push_back(fit_height(working, best.params.theta, best.params.offset));
  }
  best.value = max_line_dist(pts, best.params.line());
  // The x-axis through the centre keeps beta ≤ 1/2 whatever the optimiser did.
  const Fit centre_line{{0.0, 0.0, 0.0}, max_line_dist(pts, HorizontalLine{})};
  if (better(centre_line, best)) best = centre_line;
  return best;
}

inline BetaResult finish(std::span<const HeisPoint> unit_pts, const UnitFrame& frame, const Fit& fit,
                         std::size_t contained) {
  BetaResult r;
  const HorizontalLine unit_line = fit.params.line();
  r.beta = std::clamp(fit.value / 2.0, 0.0, 1.0);
  r.line = frame.from_unit(unit_line);
  r.contained = contained;
  double worst = -1.0;
  for (const HeisPoint& p : unit_pts) {
    const double d = line_dist(p, unit_line);
    if (d > worst) {
      worst = d;
      r.achieving_point = frame.from_unit(p);
    }
  }
  return r;
}

inline BetaResult vacuous_result(const Ball& B) {
  BetaResult r;
  r.line = line_from_point_direction(B.center(), 0.0);
  r.achieving_point = B.center();
  r.vacuous = true;
  return r;
}

}  // namespace detail

inline std::vector<HeisPoint> points_in_ball(std::span<const HeisPoint> E, const Ball& B) {
  std::vector<HeisPoint> out;
  for (const HeisPoint& p : E) {
    if (B.contains(p)) out.push_back(p);
  }
  return out;
}

/// Grid reference for beta_heis: exhaustive over (theta, offset) with the
/// height solved exactly per cell, then one Nelder–Mead refinement from the
/// best cell. certified_gap is the largest objective change to a neighbouring
/// cell, i.e. the local modulus of the grid at this resolution.
inline BetaResult beta_heis_oracle(std::span<const HeisPoint> E, const Ball& B, int resolution,
                                   int refine_iterations = 200) {
  if (resolution < 2 || resolution > 400) {
    throw ResourceError("beta_heis_oracle: resolution must lie in [2, 400], got " +
                        std::to_string(resolution));
  }
  const std::vector<HeisPoint> inside = points_in_ball(E, B);
  if (inside.size() > 10000) {
    throw ResourceError("beta_heis_oracle: " + std::to_string(inside.size()) +
                        " points in ball exceed the 10000 point guard");
  }
  if (inside.empty()) return detail::vacuous_result(B);
  if (inside.size() == 1) {
    BetaResult r;
    r.line = line_from_point_direction(inside[0], 0.0);
    r.achieving_point = inside[0];
    r.contained = 1;
    return r;
  }

  const detail::UnitFrame frame{B.center(), B.radius()};
  std::vector<HeisPoint> unit;
  unit.reserve(inside.size());
  for (const HeisPoint& p : inside) unit.push_back(frame.to_unit(p));

  // Odd offset count so the grid always contains offset 0.
  const int n = resolution;
  const int m = resolution | 1;
  std::vector<detail::Fit> grid(static_cast<std::size_t>(n * m));
  auto at = [&](int i, int j) -> detail::Fit& { return grid[static_cast<std::size_t>(i * m + j)]; };
  int bi = 0;
  int bj = 0;
  for (int i = 0; i < n; ++i) {
    const double theta = std::numbers::pi * i / n;
    for (int j = 0; j < m; ++j) {
      const double offset = -2.0 + 4.0 * j / (m - 1);
      at(i, j) = detail::fit_height(unit, theta, offset, 80);
      if (detail::better(at(i, j), at(bi, bj))) {
        bi = i;
        bj = j;
      }
    }
  }
  double modulus = 0.0;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const int i = (bi + di + n) % n;
      const int j = bj + dj;
      if (j < 0 || j >= m) continue;
      modulus = std::max(modulus, std::abs(at(i, j).value - at(bi, bj).value));
    }
  }

  detail::Fit best = detail::polish(unit, at(bi, bj), refine_iterations);
  if (detail::better(at(bi, bj), best)) best = at(bi, bj);
  BetaResult r = detail::finish(unit, frame, best, inside.size());
  r.certified_gap = modulus / 2.0;
  return r;
}

/// Best horizontal line fit found for E∩B; beta is an upper bound for the
/// true infimum.
inline BetaResult beta_heis(std::span<const HeisPoint> E, const Ball& B, const BetaBudget& budget = {}) {
  const std::vector<HeisPoint> inside = points_in_ball(E, B);
  if (inside.empty()) return detail::vacuous_result(B);
  if (inside.size() == 1) {
    BetaResult r;
    r.line = line_from_point_direction(inside[0], 0.0);
    r.achieving_point = inside[0];
    r.contained = 1;
    return r;
  }

  const detail::UnitFrame frame{B.center(), B.radius()};
  std::vector<HeisPoint> unit;
  unit.reserve(inside.size());
  for (const HeisPoint& p : inside) unit.push_back(frame.to_unit(p));

  BetaResult r = detail::finish(unit, frame, detail::fit_unit_frame(unit, budget), inside.size());
  if (budget.certify_resolution > 0) {
    const BetaResult reference = beta_heis_oracle(E, B, budget.certify_resolution);
    r.certified_gap = std::max(0.0, r.beta - reference.beta);
  }
  return r;
}

/// Euclidean Jones β of π(E∩B): half the minimal strip width over diam(B).
/// diam(π(B)) is taken equal to diam(B).
struct EuclideanBeta {
  double beta = 0.0;
  bool vacuous = false;
};

inline EuclideanBeta beta_euclidean_2d(std::span<const HeisPoint> E, const Ball& B) {
  std::vector<Vec2> proj;
  for (const HeisPoint& p : E) {
    if (B.contains(p)) proj.push_back(proj_pi(p));
  }
  if (proj.empty()) return {0.0, true};
  const planar::Strip s = planar::min_width_strip(proj);
  return {0.5 * s.width / B.diam(), false};
}

}  // namespace heistsp
