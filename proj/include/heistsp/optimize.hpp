#pragma once

// Derivative-free minimisers used by the line and β fitters.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace heistsp::opt {

struct Minimum1D {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a unimodal f on [lo, hi]. Stops when the bracket
/// is narrower than `tol` or after `max_iter` shrinks.
template <class F>
Minimum1D golden_section(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum1D{c, fc} : Minimum1D{d, fd};
}

template <std::size_t N>
struct MinimumND {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
};

/// Nelder–Mead simplex with standard coefficients (1, 2, ½, ½).
/// `step` sets the initial simplex edge along each axis.
template <std::size_t N, class F>
MinimumND<N> nelder_mead(F&& f, std::array<double, N> start, std::array<double, N> step,
                         int max_iter, double ftol = 1e-15) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> values;
  simplex[0] = start;
  values[0] = f(start);
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
    values[i + 1] = f(simplex[i + 1]);
  }

  auto blend = [](const Point& a, const Point& b, double t) {
    Point r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  std::array<std::size_t, N + 1> order;
  int it = 0;
  for (; it < max_iter; ++it) {
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    const std::size_t best = order[0];
    const std::size_t worst = order[N];
    const std::size_t second = order[N - 1];
    if (std::abs(values[worst] - values[best]) <= ftol * (1.0 + std::abs(values[best]))) break;

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += simplex[i][k] / static_cast<double>(N);
    }

    const Point reflected = blend(centroid, simplex[worst], -1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const Point expanded = blend(centroid, simplex[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point contracted = outside ? blend(centroid, reflected, 0.5)
                                     : blend(centroid, simplex[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      simplex[i] = blend(simplex[best], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    if (values[i] < values[best]) best = i;
  }
  return {simplex[best], values[best], it};
}

}  // namespace heistsp::opt
