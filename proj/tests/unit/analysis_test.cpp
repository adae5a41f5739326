#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chargedrop/analysis.hpp"
#include "chargedrop/error.hpp"

using namespace chargedrop;
using namespace chargedrop::analysis;

TEST(DecayExponent, HalfHalfOne) {
  const auto d = decay_exponent(0.5, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(d.beta, 0.5);
  EXPECT_NEAR(d.C, 1.0 / (std::sqrt(0.5) - 0.5), 1e-12);
  EXPECT_LE(0.5 + 1.0 / d.C, std::pow(0.5, d.beta));
  // 60-step iteration of the saturated recurrence stays under the bound
  double psi = 1.0, r = 1.0;
  for (int k = 1; k <= 60; ++k) {
    psi = 0.5 * psi + r;  // lambda = 1, delta = 1, r0 = 1
    r *= 0.5;
    EXPECT_LE(psi, d.C * std::pow(r, 0.5) * 2.0 * (1.0 + 1e-12)) << k;
  }
}

TEST(DecayExponent, LimitTowardThetaToTheDelta) {
  const double theta = 0.3, delta = 0.8;
  const auto d = decay_exponent(theta, std::pow(theta, delta) * (1.0 - 1e-9), delta);
  EXPECT_NEAR(d.beta, 0.5 * delta, 1e-8);
}

TEST(DecayExponent, OutputsSatisfyStrictInequalities) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  for (int i = 0; i < 2000; ++i) {
    const double theta = u(rng), gamma = u(rng), delta = u(rng);
    const auto d = decay_exponent(theta, gamma, delta);
    EXPECT_LT(gamma, std::pow(theta, d.beta));
    EXPECT_LT(d.beta, delta);
    EXPECT_GT(d.C, 0.0);
  }
}

TEST(VerifyDecay, PowerLawHolds) {
  DecayHypothesis h;
  h.theta = 0.5;
  h.gamma = 0.6;
  h.delta = 0.7;
  h.psi = [](double r) { return std::pow(r, 0.7); };  // psi(theta r) = theta^0.7 psi(r) <= 0.6 psi(r) + ...
  const auto d = decay_exponent(h.theta, h.gamma, h.delta);
  const auto c = verify_decay(h, d.beta, d.C, 60);
  EXPECT_TRUE(c.hypothesis_holds);
  EXPECT_TRUE(c.conclusion_holds);
}

TEST(VerifyDecay, ConstantHoldsTrivially) {
  DecayHypothesis h;
  h.gamma = 0.9;
  h.lambda = 1.0;
  h.psi = [](double) { return 0.05; };
  const auto d = decay_exponent(h.theta, h.gamma, h.delta);
  EXPECT_TRUE(verify_decay(h, d.beta, d.C, 40).conclusion_holds);
}

TEST(VerifyDecay, DetectsViolatedHypothesis) {
  // psi = -log r decays slower than any power; claiming gamma = 0.1 is false.
  DecayHypothesis h;
  h.theta = 0.5;
  h.gamma = 0.1;
  h.delta = 0.5;
  h.lambda = 0.01;
  h.r0 = 0.5;
  h.psi = [](double r) { return -std::log(r); };
  const auto d = decay_exponent(h.theta, h.gamma, h.delta);
  const auto c = verify_decay(h, d.beta, d.C, 60);
  EXPECT_FALSE(c.hypothesis_holds);
  EXPECT_FALSE(c.conclusion_holds);
  EXPECT_GT(c.max_violation, 0.0);
}

TEST(VerifyDecay, SaturatedSequencesPass) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const auto h = random_hypothesis(rng, 100);
    const auto d = decay_exponent(h.theta, h.gamma, h.delta);
    const auto c = verify_decay(h, d.beta, d.C, 100);
    EXPECT_TRUE(c.hypothesis_holds);
    EXPECT_TRUE(c.conclusion_holds) << c.max_violation;
  }
}

TEST(DecayExponent, RejectsOutOfRange) {
  EXPECT_THROW(decay_exponent(1.0, 0.5, 0.5), Error);
  EXPECT_THROW(decay_exponent(0.5, 0.0, 0.5), Error);
}

TEST(Harness, BallIsExcluded) {
  const auto s = stability_ratio_harness("y20", {0.0, 0.05}, harmonic_family(8, 2, 0, {0.0, 0.05}), 2.0,
                                         {{512, 500}, 1e-10, 1e-9});
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_FALSE(s.rows[0].included);
  EXPECT_NEAR(s.rows[0].willmore_excess, 0.0, 1e-12);
  EXPECT_TRUE(s.rows[1].included);
  EXPECT_TRUE(s.all_nonnegative);
}

TEST(Harness, CurveFamilyRatiosFinite) {
  const std::vector<double> t{0.04, 0.08};
  const auto s = stability_ratio_harness("cos2", t, cosine_family(2, t), 1.0, {{512, 600}, 1e-10, 1e-9});
  EXPECT_TRUE(s.all_nonnegative);
  for (const auto& r : s.rows) {
    EXPECT_TRUE(std::isfinite(r.perimeter_over_willmore));
    EXPECT_GT(r.perimeter_over_willmore, 0.0);
  }
}
