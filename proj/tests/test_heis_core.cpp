#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"

using namespace heistsp;

namespace {

void expect_point(const HeisPoint& a, double x, double y, double z, double tol = 0.0) {
  EXPECT_NEAR(a.x(), x, tol);
  EXPECT_NEAR(a.y(), y, tol);
  EXPECT_NEAR(a.z(), z, tol);
}

HeisPoint random_point(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), scale * u(rng)};
}

}  // namespace

TEST(GroupLaw, Examples) {
  expect_point(HeisPoint(0, 0, 0) * HeisPoint(3, -1, 5), 3, -1, 5);
  expect_point(HeisPoint(1, 0, 0) * HeisPoint(0, 1, 0), 1, 1, 2);
  expect_point(HeisPoint(1, 2, 3) * HeisPoint(-1, -2, -3), 0, 0, 0);
  expect_point(group_inv(HeisPoint(0, 0, 0)), 0, 0, 0);
  expect_point(group_inv(HeisPoint(1, 2, 3)), -1, -2, -3);
  expect_point(group_inv(HeisPoint(0, 0, 7)), 0, 0, -7);
}

TEST(GroupLaw, AssociativeWithInverse) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const HeisPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    const HeisPoint l = (a * b) * c, r = a * (b * c);
    expect_point(l, r.x(), r.y(), r.z(), 1e-12);
    const HeisPoint e = a * group_inv(a);
    expect_point(e, 0, 0, 0, 1e-12);
    const HeisPoint rel = relative(a, b), composed = group_inv(a) * b;
    expect_point(rel, composed.x(), composed.y(), composed.z(), 1e-12);
  }
}

TEST(KoranyiNorm, Examples) {
  EXPECT_DOUBLE_EQ(koranyi_norm(HeisPoint(1, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(koranyi_norm(HeisPoint(0, 0, 4)), 2.0);
  // 8^{1/4}, evaluated independently at high precision.
  EXPECT_NEAR(koranyi_norm(HeisPoint(1, 1, 2)), 1.681792830507429, 1e-15);
  EXPECT_NEAR(koranyi_norm(HeisPoint(1, 1, 2)), std::pow(std::pow(1.0 + 1.0, 2) + 4.0, 0.25), 1e-15);
  EXPECT_EQ(koranyi_norm(HeisPoint(0, 0, 0)), 0.0);
}

TEST(Metric, Examples) {
  const HeisPoint a(0.3, -0.2, 1.1);
  EXPECT_EQ(dist(a, a), 0.0);
  EXPECT_DOUBLE_EQ(dist(HeisPoint(0, 0, 0), HeisPoint(1, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(dist(HeisPoint(-1, 0, 0), HeisPoint(1, 0, 0)), 2.0);
}

TEST(Metric, CcBounds) {
  auto b = cc_dist_bounds(HeisPoint(1, 2, 3), HeisPoint(1, 2, 3));
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
  b = cc_dist_bounds(HeisPoint(0, 0, 0), HeisPoint(1, 0, 0));
  EXPECT_DOUBLE_EQ(b.lower, 1.0);
  EXPECT_DOUBLE_EQ(b.upper, 2.0);
  b = cc_dist_bounds(HeisPoint(0, 0, 0), HeisPoint(0, 0, 1));
  EXPECT_DOUBLE_EQ(b.lower, 1.0);
  EXPECT_DOUBLE_EQ(b.upper, 2.0);
}

TEST(Metric, RandomProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> logl(-3.0, 3.0);
  for (int i = 0; i < 100000; ++i) {
    const HeisPoint a = random_point(rng), b = random_point(rng), c = random_point(rng), g = random_point(rng);
    const double ab = dist(a, b), bc = dist(b, c), ac = dist(a, c);
    const double scale = std::max({koranyi_norm(a), koranyi_norm(b), koranyi_norm(c), 1.0});
    ASSERT_LE(ac, ab + bc + 1e-12 * scale);
    ASSERT_NEAR(dist(g * a, g * b), ab, 1e-12 * std::max(ab, 1.0) * 8);
    ASSERT_NEAR(dist(b, a), ab, 1e-12 * ab);
    ASSERT_LE(norm(proj_pi(a) - proj_pi(b)), ab * (1 + 1e-14));
    ASSERT_LE(nh(relative(a, b)), ab * (1 + 1e-14));
    if (i < 10000) {
      const ScaleFactor lam(std::pow(10.0, logl(rng)));
      ASSERT_NEAR(dist(dilate(lam, a), dilate(lam, b)), lam.value() * ab, 1e-10 * lam.value() * ab);
      const double t = ang(rng);
      ASSERT_NEAR(dist(rotate_z(t, a), rotate_z(t, b)), ab, 1e-12 * ab * 8);
    }
  }
}

TEST(Dilation, ExamplesAndErrors) {
  expect_point(dilate(ScaleFactor(1.0), HeisPoint(1.5, -2, 3)), 1.5, -2, 3);
  expect_point(dilate(ScaleFactor(2.0), HeisPoint(1, 1, 1)), 2, 2, 4);
  expect_point(dilate(ScaleFactor(0.5), HeisPoint(2, 0, 4)), 1, 0, 1);
  EXPECT_THROW(ScaleFactor(0.0), std::invalid_argument);
  EXPECT_THROW(ScaleFactor(-1.0), std::invalid_argument);
  EXPECT_NEAR(koranyi_norm(dilate(ScaleFactor(3.0), HeisPoint(0.2, 0.4, -0.7))),
              3.0 * koranyi_norm(HeisPoint(0.2, 0.4, -0.7)), 1e-14);
}

TEST(Rotation, Examples) {
  expect_point(rotate_z(0.0, HeisPoint(1, 2, 3)), 1, 2, 3);
  expect_point(rotate_z(std::numbers::pi / 2, HeisPoint(1, 0, 5)), 0, 1, 5, 1e-15);
  expect_point(rotate_z(std::numbers::pi, HeisPoint(1, 1, -2)), -1, -1, -2, 1e-15);
}

TEST(Projection, Examples) {
  EXPECT_EQ(proj_pi(HeisPoint(1, 2, 3)), (Vec2{1, 2}));
  EXPECT_EQ(proj_pi(HeisPoint(0, 0, 9)), (Vec2{0, 0}));
  EXPECT_EQ(proj_pi(HeisPoint(1, 0, 0) * HeisPoint(0, 1, 0)), proj_pi(HeisPoint(1, 0, 0)) + proj_pi(HeisPoint(0, 1, 0)));
}

TEST(NonHorizontality, Examples) {
  EXPECT_EQ(nh(HeisPoint(5, -3, 0)), 0.0);
  EXPECT_EQ(nh(HeisPoint(0, 0, 4)), 2.0);
  const HeisPoint a(1, 1, 2);
  // N(a⁻¹·π̃(a)) computed by composition.
  EXPECT_NEAR(koranyi_norm(group_inv(a) * proj_pi_tilde(a)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(nh(a), 1.4142135623730951, 1e-15);
}

TEST(Sigma, Examples) {
  const HeisPoint a(0.4, 0.1, -2);
  EXPECT_EQ(sigma(a, a), 0.0);
  EXPECT_DOUBLE_EQ(sigma(HeisPoint(0, 0, 0), HeisPoint(0, 0, 4)), 1.0);
  EXPECT_DOUBLE_EQ(sigma(HeisPoint(1, 0, 0), HeisPoint(0, 1, 0)), -0.5);
  EXPECT_NEAR(nh(relative(HeisPoint(1, 0, 0), HeisPoint(0, 1, 0))), 2.0 * std::sqrt(0.5), 1e-15);
}

TEST(Sigma, NhIdentity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const HeisPoint a = random_point(rng), b = random_point(rng);
    const double lhs = nh(relative(a, b));
    ASSERT_NEAR(lhs, 2.0 * std::sqrt(std::abs(sigma(a, b))), 1e-12 * std::max(lhs, 1e-3));
  }
}

// Greedy r/2-nets of dense samples of random balls stay bounded in size.
TEST(Doubling, GreedyHalfNetBounded) {
  constexpr std::size_t kFrozenBound = 70;  // measured once with these seeds
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.05, 5.0);
  std::size_t worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Ball B(random_point(rng, 3.0), ur(rng));
    const auto S = fixtures::uniform_in_ball(B, 1500, 100 + trial);
    std::vector<HeisPoint> net;
    for (const HeisPoint& p : S) {
      if (std::none_of(net.begin(), net.end(), [&](const HeisPoint& q) { return dist(p, q) <= 0.5 * B.radius(); })) {
        net.push_back(p);
      }
    }
    worst = std::max(worst, net.size());
  }
  RecordProperty("max_half_net", static_cast<int>(worst));
  EXPECT_LE(worst, kFrozenBound);
}
