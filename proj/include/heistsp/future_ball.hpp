#pragma once

// Search for a nearby ball whose β can pay for the triangle excess of a
// well-spread triple in B. Candidates are dyadic subballs B'' of 16·D7·B
// centred at points of E; each is scored by β(D7B'')^p · diam(D7B'').

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "heistsp/beta.hpp"
#include "heistsp/builder.hpp"
#include "heistsp/heisenberg.hpp"
#include "heistsp/parallel.hpp"

namespace heistsp {

struct FutureBallOptions {
  double alpha1 = 0.1;  ///< pairwise distances ≥ alpha1·diam(B)
  double alpha2 = 0.9;  ///< pairwise distances ≤ alpha2·diam(B)
  /// Curvature constant: the largest excess/(β²·diam) seen in sampled flat
  /// balls (about 30.4), rounded up.
  double D_FFP = 32.0;
  std::size_t max_candidates = 20000;
};

struct FutureBallCandidate {
  Ball ball;
  double beta = 0.0;   ///< β(E, D7·ball)
  double score = 0.0;  ///< β^p · diam(D7·ball)
  bool e_at_2 = false;
  bool e_at_4 = false;
};

struct FutureBallReport {
  explicit FutureBallReport(Ball source) : source_ball(source) {}

  Ball source_ball;
  std::optional<Ball> found_ball;
  double excess = 0.0;
  double epsilon = 0.0;  ///< D7 · β(E, D7·B)
  double q_exponent = std::numeric_limits<double>::quiet_NaN();
  double beta_found = 0.0;
  bool in_regime = false;
  bool spread_ok = false;
  bool satisfies_e_at_2 = false;
  bool satisfies_e_at_4 = false;
  std::vector<FutureBallCandidate> search_log;
};

inline FutureBallReport future_ball_search(std::span<const HeisPoint> E, const Ball& B,
                                           const std::array<HeisPoint, 3>& triple, const BuilderConfig& cfg = {},
                                           const FutureBallOptions& options = {}) {
  cfg.validate();
  if (!(options.alpha1 > 0.0 && options.alpha1 < options.alpha2 && options.alpha2 < 1.0)) {
    throw std::invalid_argument("future_ball_search: need 0 < alpha1 < alpha2 < 1");
  }
  for (const HeisPoint& p : triple) {
    if (!B.contains(p)) throw std::invalid_argument("future_ball_search: triple must lie in B");
  }

  FutureBallReport rep(B);
  rep.spread_ok = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double d = dist(triple[i], triple[j]);
      rep.spread_ok = rep.spread_ok && d >= options.alpha1 * B.diam() && d <= options.alpha2 * B.diam();
    }
  }
  rep.excess = excess(triple[0], triple[1], triple[2]);
  const double D7 = cfg.D7();
  const double p = cfg.p();
  rep.epsilon = D7 * beta_heis(E, B.scaled(D7), cfg.beta_budget).beta;
  if (!(rep.excess > 0.0)) return rep;

  const double ratio = rep.excess / (options.D_FFP * B.diam());
  if (rep.epsilon > 0.0 && rep.epsilon < 1.0 && ratio > 0.0 && ratio < 1.0) {
    rep.q_exponent = std::log(ratio) / std::log(rep.epsilon);
  }
  rep.in_regime = std::isfinite(rep.q_exponent) && rep.q_exponent >= 2.0;
  if (!rep.in_regime) return rep;

  const double scale_q = std::pow(rep.epsilon, rep.q_exponent / 2.0);
  const double min_diam = scale_q * B.diam() / cfg.D1;
  const Ball outer = B.scaled(16.0 * D7);

  std::vector<Ball> balls;
  for (double s = outer.radius(); 2.0 * s >= min_diam && balls.size() < options.max_candidates; s *= 0.5) {
    // Centres: a greedy s/2-separated subset of the admissible points of E.
    std::vector<HeisPoint> centres;
    for (const HeisPoint& c : E) {
      if (dist(c, outer.center()) + s > outer.radius()) continue;
      bool fresh = true;
      for (const HeisPoint& other : centres) {
        if (dist(other, c) <= 0.5 * s) {
          fresh = false;
          break;
        }
      }
      if (fresh) centres.push_back(c);
    }
    for (const HeisPoint& c : centres) {
      if (balls.size() >= options.max_candidates) break;
      balls.emplace_back(c, s);
    }
  }

  rep.search_log.assign(balls.size(), FutureBallCandidate{balls.empty() ? B : balls.front()});
  parallel_for(balls.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    const Ball wide = balls[i].scaled(D7);
    const double b = beta_heis(E, wide, cfg.beta_budget).beta;
    const double bp = std::pow(b, p);
    FutureBallCandidate cand{balls[i], b, bp * wide.diam()};
    cand.e_at_2 = rep.excess <= cfg.D1 * cand.score;
    cand.e_at_4 = bp <= cfg.D1 * scale_q;
    rep.search_log[i] = cand;
  });

  // Best score among candidates meeting the β bound, else best overall.
  const FutureBallCandidate* best = nullptr;
  for (bool need_bound : {true, false}) {
    for (const auto& cand : rep.search_log) {
      if (need_bound && !cand.e_at_4) continue;
      if (!best || cand.score > best->score) best = &cand;
    }
    if (best) break;
  }
  if (best && best->score > 0.0) {
    rep.found_ball = best->ball;
    rep.beta_found = best->beta;
    rep.satisfies_e_at_2 = best->e_at_2;
    rep.satisfies_e_at_4 = best->e_at_4;
  }
  return rep;
}

}  // namespace heistsp
