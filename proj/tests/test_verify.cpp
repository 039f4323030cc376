#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace heistsp;
using namespace heistsp::verify;

namespace {

SuiteOptions small(std::uint64_t seed = 42) {
  SuiteOptions o;
  o.seed = seed;
  o.exact_samples = 3000;
  o.crosscheck_samples = 2000;
  return o;
}

double empirical(const LemmaCheck& c, const std::string& key) {
  for (const auto& [k, v] : c.empirical) {
    if (k == key) return v;
  }
  ADD_FAILURE() << "missing " << key << " in " << c.id;
  return std::nan("");
}

bool same(const SuiteReport& a, const SuiteReport& b) {
  if (a.checks.size() != b.checks.size()) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const auto& x = a.checks[i];
    const auto& y = b.checks[i];
    if (x.id != y.id || x.samples != y.samples || x.violations != y.violations || x.seed != y.seed ||
        x.worst_margin != y.worst_margin || x.empirical != y.empirical) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(Verify, ExactChecksPassAndRunIsDeterministic) {
  const auto a = run_suite(small());
  const auto b = run_suite(small());
  EXPECT_TRUE(a.exact_ok());
  EXPECT_TRUE(same(a, b));
  for (const char* id : {"shortest-to-line", "closest-to-line", "trap-unaffine", "nh-min-beta"}) {
    const auto* c = a.find(id);
    ASSERT_NE(c, nullptr) << id;
    EXPECT_EQ(c->kind, CheckKind::Exact);
    EXPECT_EQ(c->violations, 0u) << id;
    EXPECT_EQ(c->samples, 3000u);
    EXPECT_GE(c->worst_margin, -1e-9);
  }
  for (const char* id : {"flat-exit", "sharp-turn", "angle-improvement"}) {
    const auto* c = a.find(id);
    ASSERT_NE(c, nullptr) << id;
    EXPECT_EQ(c->kind, CheckKind::Dichotomy);
    EXPECT_GT(c->samples, 0u) << id;
    EXPECT_EQ(c->violations, 0u) << id;
  }
  EXPECT_GE(empirical(*a.find("flat-exit"), "min_projected_spread_over_diam"), 0.25);
}

TEST(Verify, SeedChangesSamples) {
  const auto a = run_suite(small(1));
  const auto b = run_suite(small(2));
  EXPECT_FALSE(same(a, b));
  EXPECT_TRUE(a.exact_ok());
  EXPECT_TRUE(b.exact_ok());
}

TEST(Verify, TamperFails) {
  auto o = small();
  o.tamper = true;
  const auto r = run_suite(o);
  EXPECT_FALSE(r.exact_ok());
  EXPECT_GT(r.find("nh-min-beta")->violations, 0u);
}

TEST(Verify, FrozenEmpiricalConstants) {
  // Sampled checks do not depend on the exact-sample count.
  const auto r = run_suite(small());
  EXPECT_NEAR(empirical(*r.find("curvature"), "empirical_D_FFP"), 30.420246413782394, 1e-9);
  EXPECT_NEAR(empirical(*r.find("large-r2-beta"), "empirical_D0"), 93.6056121460736, 1e-9);
  EXPECT_NEAR(empirical(*r.find("large-r2-beta"), "taylor_constant_D3"), std::sqrt(500.0), 1e-9);
  EXPECT_GE(empirical(*r.find("nh-min-beta"), "min_ratio_lhs_over_bound"), 1.0);
  EXPECT_NEAR(empirical(*r.find("sharp-turn"), "turn_distance_over_eps2_div_M"), 0.11467746863398777, 1e-9);
  EXPECT_NEAR(empirical(*r.find("angle-improvement"), "min_tilde_beta_over_M2_div_eps2"), 0.125, 1e-9);
}

TEST(Verify, IntroExcessMatchesClosedForm) {
  const auto r = run_suite(small());
  const auto* c = r.find("intro-excess");
  ASSERT_NE(c, nullptr);
  ASSERT_EQ(c->empirical.size(), 4u);
  const double eps[] = {0.2, 0.1, 0.05, 0.025};
  for (int i = 0; i < 4; ++i) {
    const double closed = 2.0 * (std::pow(1.0 + eps[i] * eps[i], 0.25) - 1.0) / (eps[i] * eps[i]);
    EXPECT_NEAR(c->empirical[static_cast<std::size_t>(i)].second, closed, 1e-12);
    EXPECT_NEAR(closed, 0.5, 0.05);
  }
  EXPECT_EQ(c->violations, 0u);
}

TEST(Verify, IntroWitnessScalesLikeRootEps) {
  // The witness distance is exactly √ε: the lifted middle point sits above the
  // line's base point, and no horizontal line through the base beats that.
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    EXPECT_NEAR(verify::detail::intro_witness_distance(eps), std::sqrt(eps), 1e-12);
  }
}

TEST(Verify, HorizontalChainIsHorizontal) {
  const auto chain = verify::detail::horizontal_chain([](double x) { return 0.3 * x * x; }, -1.0, 1.0, 0.05);
  ASSERT_GT(chain.size(), 2u);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    EXPECT_LE(dist(chain[i - 1], chain[i]), 0.05 + 1e-6);
  }
}
