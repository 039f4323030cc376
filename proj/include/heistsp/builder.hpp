#pragma once

// Multiscale curve construction through a finite set E ⊂ ℍ.
//
// Γ_{k_min} is a single point. Going from scale k to k+1, every point of
// Δ_{k+1} \ Δ_k is spliced into the curve using the ball B(P, C1·2^{-k})
// around its parent P ∈ Δ_k:
//   flat ball (β < eps0): insert between the two curve neighbours that bracket
//     it along the β-witness line, or extend a curve end lying in the ball;
//   otherwise: attach at the nearest curve vertex.
// After each scale the net points of every ball B(P, C1·2^{-(k+1)}) are checked
// for connectivity inside Γ ∩ ball and joined by a detour edge if needed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "heistsp/beta.hpp"
#include "heistsp/curve.hpp"
#include "heistsp/heisenberg.hpp"
#include "heistsp/horizontal_line.hpp"
#include "heistsp/multiscale.hpp"
#include "heistsp/parallel.hpp"
#include "heistsp/union_find.hpp"

namespace heistsp {

class ScaleRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BuilderConfig {
  double C1 = 16.0;     ///< ball multiplier
  double eps0 = 0.05;   ///< flatness threshold
  double r = 3.0;       ///< target exponent, in (2, 4)
  std::optional<int> k_min;
  std::optional<int> k_max;
  BetaBudget beta_budget{};
  double A = 4.0;       ///< Carleson ball multiplier
  double D1 = 1e4;      ///< future-ball constant
  int threads = 0;
  bool track_p5 = true;

  [[nodiscard]] double p() const { return 0.5 * (r + 4.0); }
  [[nodiscard]] double D7() const { return 2.0 * C1; }

  void validate() const {
    if (!(C1 > 1.0) || !std::isfinite(C1)) throw std::invalid_argument("BuilderConfig: C1 must be > 1");
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("BuilderConfig: eps0 must lie in (0, 1)");
    if (!(r > 2.0 && r < 4.0)) throw std::invalid_argument("BuilderConfig: r must lie in (2, 4)");
    if (!(A >= 1.0)) throw std::invalid_argument("BuilderConfig: A must be >= 1");
    if (!(D1 > 0.0)) throw std::invalid_argument("BuilderConfig: D1 must be > 0");
  }
};

enum class SpliceCase { Flat, NonFlat, Connect };

inline const char* to_string(SpliceCase c) {
  switch (c) {
    case SpliceCase::Flat: return "flat";
    case SpliceCase::NonFlat: return "nonflat";
    case SpliceCase::Connect: return "connect";
  }
  return "?";
}

struct LedgerEntry {
  int k = 0;
  std::size_t point_index = 0;  ///< into BuildResult::points
  HeisPoint ball_center;
  double ball_radius = 0.0;
  SpliceCase kind = SpliceCase::Flat;
  double beta = 0.0;
  double cost = 0.0;  ///< change of curve length caused by this splice
};

struct BuildResult {
  std::vector<HeisPoint> points;       ///< E with exact duplicates removed
  std::vector<std::size_t> vertex_ids;  ///< curve as indices into points
  PolygonalCurve curve;
  std::vector<LedgerEntry> ledger;
  NetHierarchy nets;
  int k_min = 0;
  int k_max = 0;
  std::vector<double> scale_lengths;  ///< ℓ(Γ_k), k = k_min..k_max
  std::size_t p4_checks = 0;
  std::size_t p4_repairs = 0;
  /// Largest distance from a replaced edge to its replacement, divided by
  /// C1·eps0·2^{-k}. Only flat splices are tracked.
  double p5_worst_ratio = 0.0;

  [[nodiscard]] double length() const { return curve.length(); }
};

/// d(a,b) + d(b,c) − d(a,c), clamped at 0 against rounding.
inline double excess(const HeisPoint& a, const HeisPoint& b, const HeisPoint& c) {
  return std::max(0.0, dist(a, b) + dist(b, c) - dist(a, c));
}

inline std::vector<HeisPoint> dedupe_exact(std::span<const HeisPoint> E) {
  std::vector<HeisPoint> out;
  std::map<std::array<double, 3>, bool> seen;
  for (const HeisPoint& p : E) {
    if (seen.emplace(std::array<double, 3>{p.x(), p.y(), p.z()}, true).second) out.push_back(p);
  }
  return out;
}

namespace detail {

inline double min_pairwise(std::span<const HeisPoint> E) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t j = i + 1; j < E.size(); ++j) m = std::min(m, dist(E[i], E[j]));
  }
  return m;
}

/// Smallest k with every pair farther apart than 2^{-k}, so that Δ_k = E.
inline int finest_scale(double min_gap) {
  int k = static_cast<int>(std::floor(-std::log2(min_gap)));
  while (!(min_gap > scale_length(k))) ++k;
  return k;
}

class CurveState {
 public:
  CurveState(const std::vector<HeisPoint>& pts, std::vector<std::size_t> ids) : pts_(pts), ids_(std::move(ids)) {}

  [[nodiscard]] const std::vector<std::size_t>& ids() const { return ids_; }
  [[nodiscard]] const HeisPoint& at(std::size_t pos) const { return pts_[ids_[pos]]; }
  [[nodiscard]] std::size_t size() const { return ids_.size(); }

  /// Inserts point `id` before position `pos`; returns the length change.
  double insert(std::size_t pos, std::size_t id) {
    const HeisPoint& q = pts_[id];
    double delta = 0.0;
    if (pos > 0) delta += dist(at(pos - 1), q);
    if (pos < ids_.size()) delta += dist(q, at(pos));
    if (pos > 0 && pos < ids_.size()) delta -= dist(at(pos - 1), at(pos));
    ids_.insert(ids_.begin() + static_cast<std::ptrdiff_t>(pos), id);
    return delta;
  }

  /// v → w → v detour after position pos.
  double detour(std::size_t pos, std::size_t id) {
    const double d = dist(at(pos), pts_[id]);
    const std::size_t back = ids_[pos];
    ids_.insert(ids_.begin() + static_cast<std::ptrdiff_t>(pos + 1), {id, back});
    return 2.0 * d;
  }

  [[nodiscard]] double length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < ids_.size(); ++i) total += dist(at(i - 1), at(i));
    return total;
  }

 private:
  const std::vector<HeisPoint>& pts_;
  std::vector<std::size_t> ids_;
};

struct Placement {
  enum Kind { Insert, Detour } kind = Insert;
  std::size_t pos = 0;
  double cost = std::numeric_limits<double>::infinity();
};

inline void consider(Placement& best, Placement::Kind kind, std::size_t pos, double cost) {
  if (cost < best.cost) best = {kind, pos, cost};
}

inline double insertion_cost(const CurveState& c, std::size_t pos, const HeisPoint& q) {
  double cost = 0.0;
  if (pos > 0) cost += dist(c.at(pos - 1), q);
  if (pos < c.size()) cost += dist(q, c.at(pos));
  if (pos > 0 && pos < c.size()) cost -= dist(c.at(pos - 1), c.at(pos));
  return cost;
}

/// Flat ball: follow the order along the witness line.
inline std::optional<Placement> flat_placement(const CurveState& c, const HeisPoint& q, const Ball& B,
                                               const HorizontalLine& L) {
  const double tq = line_param(q, L);
  Placement best;
  bool found = false;
  std::vector<bool> inside(c.size());
  std::vector<double> t(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    inside[i] = B.contains(c.at(i));
    if (inside[i]) t[i] = line_param(c.at(i), L);
  }
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!inside[i] || !inside[i + 1]) continue;
    if (std::min(t[i], t[i + 1]) <= tq && tq <= std::max(t[i], t[i + 1])) {
      consider(best, Placement::Insert, i + 1, insertion_cost(c, i + 1, q));
      found = true;
    }
  }
  if (!found) {
    // q lies beyond the local run: extend a curve end that sits in the ball.
    if (inside.front()) {
      consider(best, Placement::Insert, 0, insertion_cost(c, 0, q));
      found = true;
    }
    if (inside.back()) {
      consider(best, Placement::Insert, c.size(), insertion_cost(c, c.size(), q));
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

/// Attach q at its nearest curve vertex, by the cheapest local option.
inline Placement nonflat_placement(const CurveState& c, const HeisPoint& q) {
  std::size_t v = 0;
  double dv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = dist(c.at(i), q);
    if (d < dv) {
      dv = d;
      v = i;
    }
  }
  Placement best;
  if (v == 0) consider(best, Placement::Insert, 0, insertion_cost(c, 0, q));
  if (v + 1 == c.size()) consider(best, Placement::Insert, c.size(), insertion_cost(c, c.size(), q));
  if (v > 0) consider(best, Placement::Insert, v, insertion_cost(c, v, q));
  if (v + 1 < c.size()) consider(best, Placement::Insert, v + 1, insertion_cost(c, v + 1, q));
  consider(best, Placement::Detour, v, 2.0 * dv);
  return best;
}

inline double replaced_edge_deviation(const HeisPoint& a, const HeisPoint& q, const HeisPoint& b) {
  double worst = 0.0;
  constexpr int kSamples = 8;
  for (int i = 1; i < kSamples; ++i) {
    const HeisPoint s = edge_point(a, b, static_cast<double>(i) / kSamples);
    worst = std::max(worst, std::min(dist_to_edge(s, a, q), dist_to_edge(s, q, b)));
  }
  return worst;
}

/// Groups of net points (by id) in B that are connected inside Γ ∩ B.
inline std::vector<std::vector<std::size_t>> local_components(const CurveState& c, const Ball& B,
                                                              const std::vector<std::size_t>& net_ids) {
  const std::size_t n = c.size();
  std::vector<bool> inside(n);
  for (std::size_t i = 0; i < n; ++i) inside[i] = B.contains(c.at(i));
  UnionFind uf(n);
  std::unordered_map<std::size_t, std::size_t> first_pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (!inside[i]) continue;
    auto [it, fresh] = first_pos.emplace(c.ids()[i], i);
    if (!fresh) uf.unite(it->second, i);
    if (i + 1 < n && inside[i + 1]) uf.unite(i, i + 1);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::size_t, std::size_t> group_of_root;
  for (std::size_t id : net_ids) {
    auto it = first_pos.find(id);
    if (it == first_pos.end()) continue;
    const std::size_t root = uf.find(it->second);
    auto [g, fresh] = group_of_root.emplace(root, groups.size());
    if (fresh) groups.emplace_back();
    groups[g->second].push_back(id);
  }
  return groups;
}

/// Positions of the curve lying in B and connected (inside B) to position `seed`.
inline std::vector<std::size_t> positions_joined_to(const CurveState& c, const Ball& B, std::size_t seed_id) {
  const std::size_t n = c.size();
  std::vector<bool> inside(n);
  for (std::size_t i = 0; i < n; ++i) inside[i] = B.contains(c.at(i));
  UnionFind uf(n);
  std::unordered_map<std::size_t, std::size_t> first_pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (!inside[i]) continue;
    auto [it, fresh] = first_pos.emplace(c.ids()[i], i);
    if (!fresh) uf.unite(it->second, i);
    if (i + 1 < n && inside[i + 1]) uf.unite(i, i + 1);
  }
  std::vector<std::size_t> out;
  const std::size_t root = uf.find(first_pos.at(seed_id));
  for (std::size_t i = 0; i < n; ++i) {
    if (inside[i] && uf.find(i) == root) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Builds a connected polygonal curve having every point of E as a vertex.
inline BuildResult build_curve(std::span<const HeisPoint> E, const BuilderConfig& cfg = {}) {
  cfg.validate();
  if (E.empty()) throw std::invalid_argument("build_curve: empty point set");

  BuildResult out;
  out.points = dedupe_exact(E);
  const auto& pts = out.points;
  const double diam = diameter(pts);

  const int auto_min = coarsest_scale(diam);
  const int auto_max = pts.size() > 1 ? detail::finest_scale(detail::min_pairwise(pts)) : auto_min;
  out.k_min = cfg.k_min.value_or(auto_min);
  out.k_max = cfg.k_max.value_or(std::max(auto_max, out.k_min));
  if (scale_length(out.k_min) < diam) {
    throw ScaleRangeError("build_curve: k_min = " + std::to_string(out.k_min) +
                          " too large, 2^{-k_min} is below diam(E)");
  }
  if (out.k_max < out.k_min) throw ScaleRangeError("build_curve: k_max < k_min");

  out.nets = build_nets(pts, out.k_min, out.k_max);
  if (out.nets.net(out.k_max).size() != pts.size()) {
    throw ScaleRangeError("build_curve: k_max = " + std::to_string(out.k_max) +
                          " too small, the finest net misses points of E");
  }

  detail::CurveState curve(pts, {out.nets.net(out.k_min).front()});
  out.scale_lengths.push_back(0.0);
  const unsigned threads = resolve_threads(cfg.threads);

  for (int k = out.k_min; k < out.k_max; ++k) {
    const double radius = cfg.C1 * scale_length(k);
    const auto& coarse = out.nets.net(k);
    const auto& fine = out.nets.net(k + 1);
    const auto& links = out.nets.parent_links[static_cast<std::size_t>(k - out.k_min)];

    // β of every parent ball used at this scale, computed up front.
    std::vector<std::size_t> parents;
    for (std::size_t j = coarse.size(); j < fine.size(); ++j) parents.push_back(links[j]);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    std::vector<BetaResult> betas(parents.size());
    parallel_for(parents.size(), threads, [&](std::size_t i) {
      betas[i] = beta_heis(pts, Ball(pts[parents[i]], radius), cfg.beta_budget);
    });
    auto beta_of = [&](std::size_t parent) -> const BetaResult& {
      return betas[static_cast<std::size_t>(std::lower_bound(parents.begin(), parents.end(), parent) -
                                            parents.begin())];
    };

    for (std::size_t j = coarse.size(); j < fine.size(); ++j) {
      const std::size_t q = fine[j];
      const std::size_t parent = links[j];
      const Ball B(pts[parent], radius);
      const BetaResult& br = beta_of(parent);

      std::optional<detail::Placement> place;
      SpliceCase kind = SpliceCase::NonFlat;
      if (br.beta < cfg.eps0) {
        place = detail::flat_placement(curve, pts[q], B, br.line);
        if (place) kind = SpliceCase::Flat;
      }
      if (!place) place = detail::nonflat_placement(curve, pts[q]);

      double cost = 0.0;
      if (place->kind == detail::Placement::Detour) {
        cost = curve.detour(place->pos, q);
      } else {
        const bool interior = place->pos > 0 && place->pos < curve.size();
        std::optional<std::pair<HeisPoint, HeisPoint>> replaced;
        if (interior) replaced.emplace(curve.at(place->pos - 1), curve.at(place->pos));
        cost = curve.insert(place->pos, q);
        if (cfg.track_p5 && kind == SpliceCase::Flat && replaced) {
          const double dev = detail::replaced_edge_deviation(replaced->first, pts[q], replaced->second);
          out.p5_worst_ratio = std::max(out.p5_worst_ratio, dev / (cfg.eps0 * radius));
        }
      }
      out.ledger.push_back({k, q, pts[parent], radius, kind, br.beta, cost});
    }

    // Net points sharing a ball at the new scale must be joined inside it.
    const double fine_radius = cfg.C1 * scale_length(k + 1);
    for (std::size_t P : fine) {
      const Ball B(pts[P], fine_radius);
      std::vector<std::size_t> members;
      for (std::size_t id : fine) {
        if (B.contains(pts[id])) members.push_back(id);
      }
      ++out.p4_checks;
      for (;;) {
        const auto groups = detail::local_components(curve, B, members);
        if (groups.size() <= 1) break;
        const auto joined = detail::positions_joined_to(curve, B, groups.front().front());
        std::size_t best_pos = joined.front();
        std::size_t best_id = groups[1].front();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t pos : joined) {
          for (std::size_t g = 1; g < groups.size(); ++g) {
            for (std::size_t id : groups[g]) {
              const double d = dist(curve.at(pos), pts[id]);
              if (d < best_d) {
                best_d = d;
                best_pos = pos;
                best_id = id;
              }
            }
          }
        }
        const double cost = curve.detour(best_pos, best_id);
        out.ledger.push_back({k + 1, best_id, pts[P], fine_radius, SpliceCase::Connect, 0.0, cost});
        ++out.p4_repairs;
      }
    }
    out.scale_lengths.push_back(curve.length());
  }

  out.vertex_ids = curve.ids();
  std::vector<HeisPoint> verts;
  verts.reserve(out.vertex_ids.size());
  for (std::size_t id : out.vertex_ids) verts.push_back(pts[id]);
  out.curve = PolygonalCurve(std::move(verts));
  return out;
}

/// Checks that every net point group of every ball at every scale of `result`
/// is connected inside the final curve's restriction to that ball. Returns the
/// number of failing balls.
inline std::size_t count_p4_failures_final(const BuildResult& result, double C1) {
  detail::CurveState curve(result.points, result.vertex_ids);
  std::size_t failures = 0;
  const auto& fine = result.nets.net(result.k_max);
  for (std::size_t P : fine) {
    const Ball B(result.points[P], C1 * scale_length(result.k_max));
    std::vector<std::size_t> members;
    for (std::size_t id : fine) {
      if (B.contains(result.points[id])) members.push_back(id);
    }
    if (detail::local_components(curve, B, members).size() > 1) ++failures;
  }
  return failures;
}

struct TheoremAResult {
  double length = 0.0;
  double diam = 0.0;
  double carleson = 0.0;
  double bound = 0.0;  ///< diam + carleson
  double ratio = 0.0;
  BuildResult build;
  CarlesonReport report;
};

/// length(Γ) / (diam(E) + Σ β(B(P, A·2^{-k}))^r 2^{-k}) over the builder's nets.
inline TheoremAResult theorem_a_check(std::span<const HeisPoint> E, const BuilderConfig& cfg = {}) {
  TheoremAResult out;
  out.build = build_curve(E, cfg);
  out.length = out.build.length();
  out.diam = diameter(out.build.points);
  out.report = carleson_sum(out.build.nets, cfg.r, cfg.A, {cfg.beta_budget, cfg.threads});
  out.carleson = out.report.total;
  out.bound = out.diam + out.carleson;
  out.ratio = out.bound > 0.0 ? out.length / out.bound : (out.length > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return out;
}

}  // namespace heistsp
