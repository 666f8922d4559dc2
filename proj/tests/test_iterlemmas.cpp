#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlheat/error.hpp"
#include "nlheat/iterlemmas.hpp"

using namespace nlheat;

TEST(GeometricDecay, DocumentedSequence) {
  // d0 = 1, e0 = 2, eps = 1, N_{k+1} = 2^k N_k^2 from N_0 = 0.5
  std::vector<double> N{0.5};
  for (int k = 0; k < 8; ++k) N.push_back(std::pow(2.0, k) * N.back() * N.back());
  EXPECT_DOUBLE_EQ(N[1], 0.25);
  const DecayReport r = geometric_decay_check(N, 1.0, 2.0, 1.0);
  EXPECT_TRUE(r.smallness_met);
  EXPECT_TRUE(r.conclusion_holds);
  EXPECT_LE(r.worst_conclusion_ratio, 1.0 + 1e-12);
  EXPECT_LE(N[1], 0.5 * N[0]);
}

TEST(GeometricDecay, ZeroTail) {
  const DecayReport r = geometric_decay_check({0.1, 0.0, 0.0, 0.0}, 1.0, 2.0, 1.0);
  EXPECT_TRUE(r.conclusion_holds);
}

TEST(GeometricDecay, HypothesisViolationNamesIndex) {
  try {
    geometric_decay_check({0.5, 0.25, 1.0}, 1.0, 2.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolation);
    EXPECT_NE(std::string(e.what()).find("k=1"), std::string::npos) << e.what();
  }
}

TEST(GeometricDecay, RandomAdmissibleDraws) {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 100; ++i) {
    const DecayInstance inst = random_decay_instance(rng);
    // independent recursion oracle
    for (std::size_t k = 0; k + 1 < inst.N.size(); ++k)
      EXPECT_LE(inst.N[k + 1], inst.d0 * std::pow(inst.e0, double(k)) * std::pow(inst.N[k], 1.0 + inst.eps) * (1 + 1e-12));
    const DecayReport r = geometric_decay_check(inst.N, inst.d0, inst.e0, inst.eps);
    EXPECT_TRUE(r.smallness_met);
    EXPECT_TRUE(r.conclusion_holds);
    for (std::size_t k = 0; k < inst.N.size(); ++k)
      EXPECT_LE(inst.N[k], std::pow(inst.e0, -double(k) / inst.eps) * inst.N[0] * (1 + 1e-12));
  }
}

TEST(Interpolation, SpecialCases) {
  EXPECT_EQ(interpolation_bound(1.0, 1.0, 2.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(interpolation_bound(1.0, 1.0, 0.0, 0.25), 1.0 / 0.75);
  const double mu = interpolation_ratio(1.0, 0.5);
  EXPECT_GT(mu, 0.0);
  EXPECT_LT(mu, 1.0);
  EXPECT_NEAR(0.5 / mu, (1.0 + 0.5) / 2.0, 1e-12);
}

TEST(Interpolation, ConstantFixedPoint) {
  const double c1 = 1.0, c2 = 0.5, eps = 0.5, delta = 0.5;
  const double F = (c1 / delta + c2) / (1.0 - eps);
  const double c = interpolation_bound(c1, c2, 1.0, eps);
  EXPECT_GE(c * (c1 / delta + c2), F * (1.0 - 1e-12));
  const InterpolationCheck chk = verify_interpolation([F](double) { return F; }, 0.0, delta, 101, c1, c2, 1.0, eps);
  EXPECT_TRUE(chk.conclusion_holds);
}

TEST(Interpolation, PowerProfile) {
  // f(t) = (R - t)^{-1} on [0, R) meets the hypothesis with c1 = 1, c2 = 0, eps = 1/2.
  const double R = 1.0;
  std::vector<double> t, f;
  for (int j = 0; j <= 200; ++j) {
    t.push_back(0.99 * R * j / 200.0);
    f.push_back(1.0 / (R - t.back()));
  }
  const InterpolationCheck chk = verify_interpolation(t, f, 1.0, 0.0, 1.0, 0.5);
  EXPECT_TRUE(chk.hypothesis_holds);
  EXPECT_TRUE(chk.conclusion_holds);
  EXPECT_GT(chk.pairs, 0u);
  EXPECT_LE(chk.worst_conclusion_ratio, 1.0);
}

TEST(Interpolation, HypothesisFailureReported) {
  std::vector<double> t{0.0, 0.5, 1.0}, f{100.0, 0.0, 0.0};
  const InterpolationCheck chk = verify_interpolation(t, f, 0.01, 0.0, 1.0, 0.1);
  EXPECT_FALSE(chk.hypothesis_holds);
}
