#pragma once

// Net hierarchies, δ-connectivity and the discrete Carleson sum
//
//   Σ_k Σ_{P ∈ Δ_k} β(B(P, A·2^{-k}))^r · 2^{-k}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heistsp/beta.hpp"
#include "heistsp/curve.hpp"
#include "heistsp/heisenberg.hpp"
#include "heistsp/parallel.hpp"
#include "heistsp/union_find.hpp"

namespace heistsp {

inline double diameter(std::span<const HeisPoint> E) {
  double d = 0.0;
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t j = i + 1; j < E.size(); ++j) d = std::max(d, dist(E[i], E[j]));
  }
  return d;
}

/// Largest k with 2^{-k} ≥ d.
inline int coarsest_scale(double d) {
  if (!(d > 0.0)) return 0;
  return static_cast<int>(std::floor(-std::log2(d)));
}

inline double scale_length(int k) { return std::ldexp(1.0, -k); }

/// Nested 2^{-k}-nets Δ_k ⊆ E for k in [k_min, k_max].
struct NetHierarchy {
  std::vector<HeisPoint> points;
  int k_min = 0;
  int k_max = 0;
  /// nets[k - k_min]: indices into `points`, in insertion order.
  std::vector<std::vector<std::size_t>> nets;
  /// parent_links[k - k_min][j]: index into `points` of the net point of Δ_k
  /// nearest to nets[k + 1 - k_min][j].
  std::vector<std::vector<std::size_t>> parent_links;
  /// 2^{-k_min} ≥ diam(E), i.e. Δ_{k_min} is a single point.
  bool coarse_scale_covers = true;

  [[nodiscard]] const std::vector<std::size_t>& net(int k) const {
    return nets.at(static_cast<std::size_t>(k - k_min));
  }
  [[nodiscard]] std::vector<HeisPoint> net_points(int k) const {
    std::vector<HeisPoint> out;
    for (std::size_t i : net(k)) out.push_back(points[i]);
    return out;
  }
};

/// Greedy farthest-point construction: Δ_{k_min} is seeded with the first
/// point, each finer net extends the previous one. Ties go to the lowest index.
/// Separation is strict (> 2^{-k}); covering is closed (≤ 2^{-k}).
inline NetHierarchy build_nets(std::span<const HeisPoint> E, int k_min, int k_max) {
  if (E.empty()) throw std::invalid_argument("build_nets: empty point set");
  if (k_max < k_min) throw std::invalid_argument("build_nets: k_max < k_min");

  NetHierarchy H;
  H.points.assign(E.begin(), E.end());
  H.k_min = k_min;
  H.k_max = k_max;
  H.coarse_scale_covers = scale_length(k_min) >= diameter(E);

  const std::size_t n = E.size();
  std::vector<double> gap(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_net(n, false);
  std::vector<std::size_t> current;
  auto insert = [&](std::size_t i) {
    in_net[i] = true;
    current.push_back(i);
    for (std::size_t j = 0; j < n; ++j) gap[j] = std::min(gap[j], dist(E[i], E[j]));
    gap[i] = 0.0;
  };
  insert(0);

  for (int k = k_min; k <= k_max; ++k) {
    const double tau = scale_length(k);
    for (;;) {
      std::size_t far = 0;
      for (std::size_t j = 1; j < n; ++j) {
        if (gap[j] > gap[far]) far = j;
      }
      if (!(gap[far] > tau)) break;
      insert(far);
    }
    H.nets.push_back(current);
  }

  for (int k = k_min; k < k_max; ++k) {
    const auto& coarse = H.net(k);
    std::vector<std::size_t> links;
    for (std::size_t i : H.net(k + 1)) {
      std::size_t best = coarse.front();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c : coarse) {
        const double d = dist(E[c], E[i]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      links.push_back(best);
    }
    H.parent_links.push_back(std::move(links));
  }

  // Separation and covering are properties of the greedy rule; verify them.
  for (int k = k_min; k <= k_max; ++k) {
    const double tau = scale_length(k);
    const auto& net = H.net(k);
    for (std::size_t a = 0; a < net.size(); ++a) {
      for (std::size_t b = a + 1; b < net.size(); ++b) {
        if (!(dist(E[net[a]], E[net[b]]) > tau)) throw std::logic_error("build_nets: separation violated");
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const bool covered = std::any_of(net.begin(), net.end(),
                                       [&](std::size_t c) { return dist(E[c], E[j]) <= tau; });
      if (!covered) throw std::logic_error("build_nets: covering violated");
    }
  }
  return H;
}

/// Parts of E under chaining by hops of length strictly less than delta.
/// Parts are listed by their smallest index; indices within a part ascend.
using Partition = std::vector<std::vector<std::size_t>>;

inline Partition delta_components(std::span<const HeisPoint> E, double delta) {
  UnionFind uf(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t j = i + 1; j < E.size(); ++j) {
      if (dist(E[i], E[j]) < delta) uf.unite(i, j);
    }
  }
  Partition parts;
  std::vector<std::size_t> slot(E.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < E.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == std::numeric_limits<std::size_t>::max()) {
      slot[root] = parts.size();
      parts.emplace_back();
    }
    parts[slot[root]].push_back(i);
  }
  return parts;
}

struct CarlesonTerm {
  int k = 0;
  std::size_t point_index = 0;
  HeisPoint P;
  double beta = 0.0;
  double contribution = 0.0;  ///< 2^{-k} β^r
};

struct CarlesonReport {
  double exponent_r = 0.0;
  double ball_multiplier_A = 0.0;
  std::vector<CarlesonTerm> terms;
  double total = 0.0;
  double diam_E = 0.0;
};

struct CarlesonOptions {
  BetaBudget budget{};
  int threads = 0;  ///< 0: HEIS_TSP_THREADS or hardware
};

inline CarlesonReport carleson_sum(const NetHierarchy& H, double r, double A,
                                   const CarlesonOptions& options = {}) {
  if (!(r > 0.0 && r <= 8.0)) throw std::invalid_argument("carleson_sum: r must lie in (0, 8]");
  if (!(A >= 1.0)) throw std::invalid_argument("carleson_sum: A must be >= 1");

  CarlesonReport report;
  report.exponent_r = r;
  report.ball_multiplier_A = A;
  report.diam_E = diameter(H.points);
  for (int k = H.k_min; k <= H.k_max; ++k) {
    for (std::size_t i : H.net(k)) report.terms.push_back({k, i, H.points[i], 0.0, 0.0});
  }

  parallel_for(report.terms.size(), resolve_threads(options.threads), [&](std::size_t t) {
    CarlesonTerm& term = report.terms[t];
    const double scale = scale_length(term.k);
    try {
      term.beta = beta_heis(H.points, Ball(term.P, A * scale), options.budget).beta;
    } catch (const ResourceError& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "carleson_sum at k=" << term.k << ", P=(" << term.P.x() << ' ' << term.P.y() << ' '
          << term.P.z() << "): " << e.what();
      throw ResourceError(msg.str());
    }
    term.contribution = scale * std::pow(term.beta, r);
  });
  for (const CarlesonTerm& term : report.terms) report.total += term.contribution;
  return report;
}

struct TheoremBOptions {
  double A = 4.0;
  std::uint64_t seed = 0;  ///< sample jitter; 0 gives the regular sampling
  CarlesonOptions carleson{};
};

struct TheoremBResult {
  double sum = 0.0;
  double length = 0.0;
  double ratio = 0.0;
  CarlesonReport report;
  std::size_t samples = 0;
};

/// Discrete β^r Carleson sum of a sampled curve against its length. Scales
/// run from the coarsest one covering the samples down to the sample spacing.
inline TheoremBResult theorem_b_check(const PolygonalCurve& curve, double sample_density, double r = 4.0,
                                      const TheoremBOptions& options = {}) {
  if (curve.size() < 2) throw std::invalid_argument("theorem_b_check: curve needs at least 2 vertices");
  if (!(sample_density > 0.0)) throw std::invalid_argument("theorem_b_check: density must be > 0");
  const std::vector<HeisPoint> samples = sample_curve(curve, sample_density, options.seed);
  const int k_min = coarsest_scale(diameter(samples));
  const int k_max = std::max(k_min, static_cast<int>(std::ceil(std::log2(sample_density))));
  const NetHierarchy H = build_nets(samples, k_min, k_max);

  TheoremBResult out;
  out.report = carleson_sum(H, r, options.A, options.carleson);
  out.sum = out.report.total;
  out.length = curve.length();
  out.ratio = out.length > 0.0 ? out.sum / out.length : 0.0;
  out.samples = samples.size();
  return out;
}

}  // namespace heistsp
