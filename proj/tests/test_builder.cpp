#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "fixtures.hpp"

using namespace heistsp;

namespace {

bool all_vertices(const BuildResult& b, const std::vector<HeisPoint>& E) {
  const auto& v = b.curve.vertices();
  return std::all_of(E.begin(), E.end(), [&](const HeisPoint& p) { return std::find(v.begin(), v.end(), p) != v.end(); });
}

// Shortest path visiting three points, by enumerating the orders.
double best_three_tour(const std::vector<HeisPoint>& E) {
  std::array<int, 3> idx{0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, dist(E[idx[0]], E[idx[1]]) + dist(E[idx[1]], E[idx[2]]));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace

TEST(Excess, Examples) {
  const HeisPoint a(-1, 0, 0), c(1, 0, 0);
  EXPECT_EQ(excess(a, a, c), 0.0);
  // 2(1.01)^{1/4} − 2, evaluated at high precision.
  EXPECT_NEAR(excess(a, HeisPoint(0, 0, 0.1), c), 0.004981358628642241, 1e-15);
  EXPECT_EQ(excess(HeisPoint(0, 0, 0), HeisPoint(1, 0, 0), HeisPoint(2, 0, 0)), 0.0);
}

TEST(CurveLength, Examples) {
  EXPECT_EQ(PolygonalCurve({HeisPoint(1, 2, 3)}).length(), 0.0);
  EXPECT_DOUBLE_EQ(PolygonalCurve({HeisPoint(0, 0, 0), HeisPoint(0.3, 0.4, 1)}).length(),
                   dist(HeisPoint(0, 0, 0), HeisPoint(0.3, 0.4, 1)));
  // (1,0,0)⁻¹·(1,1,2) = (0,1,0).
  EXPECT_EQ(relative(HeisPoint(1, 0, 0), HeisPoint(1, 1, 2)), HeisPoint(0, 1, 0));
  EXPECT_DOUBLE_EQ(PolygonalCurve({HeisPoint(0, 0, 0), HeisPoint(1, 0, 0), HeisPoint(1, 1, 2)}).length(), 2.0);
}

TEST(BuildCurve, TwoPoints) {
  const std::vector<HeisPoint> E{HeisPoint(0, 0, 0), HeisPoint(0.2, 0.1, 0.3)};
  const auto b = build_curve(E);
  EXPECT_EQ(b.curve.size(), 2u);
  EXPECT_DOUBLE_EQ(b.length(), dist(E[0], E[1]));
}

TEST(BuildCurve, SinglePointAndDuplicates) {
  const std::vector<HeisPoint> one{HeisPoint(1, 1, 1)};
  EXPECT_EQ(build_curve(one).length(), 0.0);
  const std::vector<HeisPoint> dup{HeisPoint(0, 0, 0), HeisPoint(1, 0, 0), HeisPoint(0, 0, 0)};
  const auto b = build_curve(dup);
  EXPECT_EQ(b.points.size(), 2u);
  EXPECT_DOUBLE_EQ(b.length(), 1.0);
}

TEST(BuildCurve, HorizontalSegmentIsOptimal) {
  std::vector<HeisPoint> E = fixtures::segment_x(20);
  std::reverse(E.begin() + 5, E.end());  // the builder must not rely on input order
  const auto b = build_curve(E);
  // Sorted-order tour along the axis has length exactly diam.
  EXPECT_LE(b.length(), (1.0 + 1e-6) * diameter(E));
  EXPECT_TRUE(all_vertices(b, E));
  for (const auto& e : b.ledger) {
    if (e.kind != SpliceCase::Connect) {
      EXPECT_EQ(e.kind, SpliceCase::Flat);
    }
  }
}

TEST(BuildCurve, IntroTriple) {
  // Frozen: builder length − d(a,c) ≤ C ε² with C = 0.5 (the Taylor constant of the excess).
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto E = fixtures::intro_triple(eps);
    const auto b = build_curve(E);
    EXPECT_LE(b.length(), dist(E[0], E[2]) + 0.5 * eps * eps);
    EXPECT_NEAR(b.length(), best_three_tour(E), 1e-12);
  }
}

TEST(BuildCurve, InvariantsOnRandomSets) {
  for (int t = 0; t < 4; ++t) {
    const auto E = fixtures::uniform_in_ball(Ball(HeisPoint(), 1.0), 30, 600 + t);
    const auto b = build_curve(E);
    EXPECT_TRUE(all_vertices(b, E));
    const double ledger = std::accumulate(b.ledger.begin(), b.ledger.end(), 0.0,
                                          [](double s, const LedgerEntry& e) { return s + e.cost; });
    EXPECT_NEAR(ledger, b.length(), 1e-12 * b.length());
    for (std::size_t i = 1; i < b.scale_lengths.size(); ++i) EXPECT_GE(b.scale_lengths[i], b.scale_lengths[i - 1]);
    EXPECT_DOUBLE_EQ(b.scale_lengths.back(), b.length());
    EXPECT_EQ(count_p4_failures_final(b, BuilderConfig{}.C1), 0u);
    EXPECT_LE(b.p5_worst_ratio, 1.0);
    for (std::size_t i = 1; i < b.vertex_ids.size(); ++i) EXPECT_NE(b.vertex_ids[i], b.vertex_ids[i - 1]);
  }
}

TEST(BuildCurve, SmoothLiftsKeepInvariants) {
  for (const auto& c : fixtures::smooth_lifts()) {
    const auto E = fixtures::sample_lift(c, 40, 1);
    const auto b = build_curve(E);
    EXPECT_TRUE(all_vertices(b, E)) << c.name;
    EXPECT_EQ(count_p4_failures_final(b, 16.0), 0u) << c.name;
    EXPECT_LE(b.p5_worst_ratio, 1.0) << c.name;
    EXPECT_GE(b.length(), diameter(E));
  }
}

TEST(BuildCurve, ScaleRangeErrors) {
  const auto E = fixtures::segment_x(10);
  BuilderConfig cfg;
  cfg.k_min = 2;  // 2^{-2} < diam = 1
  EXPECT_THROW(build_curve(E, cfg), ScaleRangeError);
  cfg.k_min.reset();
  cfg.k_max = 1;  // spacing 1/9 needs finer nets
  EXPECT_THROW(build_curve(E, cfg), ScaleRangeError);
  EXPECT_THROW(build_curve(std::vector<HeisPoint>{}), std::invalid_argument);
}

TEST(BuilderConfig, Validation) {
  BuilderConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.p(), 3.5);
  EXPECT_DOUBLE_EQ(cfg.D7(), 32.0);
  for (double r : {2.0, 4.0, 5.0}) {
    BuilderConfig bad;
    bad.r = r;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
  }
  BuilderConfig bad;
  bad.eps0 = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.C1 = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(TheoremA, CollinearRatio) {
  const auto t = theorem_a_check(fixtures::segment_x(12, 2.0));
  EXPECT_LE(t.ratio, 1.0 + 1e-6);
  EXPECT_NEAR(t.bound, t.diam + t.carleson, 1e-15);
}

TEST(FutureBall, OutOfRegimeWithoutExcess) {
  const auto E = fixtures::segment_x(7);
  const auto r = future_ball_search(E, Ball(HeisPoint(0.5, 0, 0), 0.5), {E[0], E[3], E[6]});
  EXPECT_FALSE(r.in_regime);
  EXPECT_FALSE(r.found_ball.has_value());
  EXPECT_TRUE(std::isnan(r.q_exponent));
}

TEST(FutureBall, RejectsBadInput) {
  const auto E = fixtures::intro_triple(0.1);
  EXPECT_THROW(future_ball_search(E, Ball(HeisPoint(), 0.5), {E[0], E[1], E[2]}), std::invalid_argument);
  FutureBallOptions o;
  o.alpha1 = 0.95;
  EXPECT_THROW(future_ball_search(E, Ball(HeisPoint(), 2.0), {E[0], E[1], E[2]}, {}, o), std::invalid_argument);
}

TEST(FutureBall, IntroTripleHasPayingCandidate) {
  const auto E = fixtures::intro_triple(0.05);
  const Ball B(HeisPoint(), 1.25);
  const BuilderConfig cfg;
  const auto r = future_ball_search(E, B, {E[0], E[1], E[2]}, cfg);
  EXPECT_TRUE(r.spread_ok);
  ASSERT_TRUE(r.in_regime);
  EXPECT_GE(r.q_exponent, 2.0);
  // Regression boolean: some candidate satisfies the excess-payment inequality.
  EXPECT_TRUE(std::any_of(r.search_log.begin(), r.search_log.end(), [](const auto& c) { return c.e_at_2; }));
  ASSERT_TRUE(r.found_ball.has_value());
  const Ball outer = B.scaled(16.0 * cfg.D7());
  EXPECT_LE(dist(outer.center(), r.found_ball->center()) + r.found_ball->radius(), outer.radius() * (1 + 1e-12));
  const double min_diam = std::pow(r.epsilon, r.q_exponent / 2.0) * B.diam() / cfg.D1;
  EXPECT_GE(r.found_ball->diam(), min_diam);
}
