#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hbt/model.hpp"
#include "oracles.hpp"

namespace hbt {
namespace {

TEST(SimParams, AcceptsClosedChiEndpoints) {
  EXPECT_NO_THROW(SimParams(0.3, 0.0, 0.5));
  EXPECT_NO_THROW(SimParams(0.3, 0.0, -0.5));
}

TEST(SimParams, RejectsInvalid) {
  EXPECT_THROW(SimParams(-0.1, 0, 0), InvalidParameter);
  EXPECT_THROW(SimParams(std::nan(""), 0, 0), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0.5, 0), InvalidParameter);
  EXPECT_THROW(SimParams(0, -0.5, 0), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0.6, 0), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0, 0.51), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0, 0, 0.0), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0, 0, 1.01), InvalidParameter);
  EXPECT_THROW(SimParams(0, 0, 0, 1.0, 0), InvalidParameter);
}

TEST(DeriveRates, SymmetricNoiseless) {
  const auto r = derive_rates(SimParams(0, 0, 0), 1.0);
  EXPECT_EQ(r.signal_a, 0.5);
  EXPECT_EQ(r.signal_b, 0.5);
  EXPECT_EQ(r.dark_a, 0.0);
  EXPECT_EQ(r.dark_b, 0.0);
}

TEST(DeriveRates, AsymmetricSplit) {
  const auto r = derive_rates(SimParams(0.5, 0.3, 0), 1.0);
  EXPECT_DOUBLE_EQ(r.signal_a, 0.8);
  EXPECT_DOUBLE_EQ(r.signal_b, 0.2);
  EXPECT_DOUBLE_EQ(r.dark_a, 0.25);
  EXPECT_DOUBLE_EQ(r.dark_b, 0.25);
}

TEST(DeriveRates, OneSidedNoiseMatchesSignal) {
  const auto r = derive_rates(SimParams(0.5, 0, 0.5), 1.0);
  EXPECT_EQ(r.signal_a, 0.5);
  EXPECT_EQ(r.signal_b, 0.5);
  EXPECT_EQ(r.dark_a, 0.5);
  EXPECT_EQ(r.dark_b, 0.0);
}

TEST(DeriveRates, RejectsNonPositiveSignal) {
  EXPECT_THROW(derive_rates(SimParams(0, 0, 0), 0.0), InvalidParameter);
  EXPECT_THROW(derive_rates(SimParams(0, 0, 0), -1.0), InvalidParameter);
}

TEST(DeriveRates, SumsAreLossless) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> sigma(0, 3), asym(-0.4999, 0.4999), chi(-0.5, 0.5),
      eff(0.01, 1.0), ks(0.01, 1e6);
  constexpr double ulp = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 2000; ++i) {
    const SimParams p(sigma(gen), asym(gen), chi(gen), eff(gen));
    const double k = ks(gen);
    const auto r = derive_rates(p, k);
    const double signal = p.efficiency() * k;
    const double dark = p.sigma() * signal;
    EXPECT_LE(std::abs(r.signal_a + r.signal_b - signal), 4 * ulp * signal);
    EXPECT_LE(std::abs(r.dark_a + r.dark_b - dark), 4 * ulp * std::max(dark, 1e-300));
    EXPECT_GE(r.signal_a, 0);
    EXPECT_GE(r.signal_b, 0);
    EXPECT_GE(r.dark_a, 0);
    EXPECT_GE(r.dark_b, 0);
  }
}

TEST(FockG2, KnownValues) {
  EXPECT_EQ(fock_g2(1), 0.0);
  EXPECT_EQ(fock_g2(2), 0.5);
  EXPECT_DOUBLE_EQ(fock_g2(100), 0.99);
}

TEST(FockG2, DomainError) {
  EXPECT_THROW(fock_g2(0), DomainError);
  EXPECT_THROW(fock_g2(-3), DomainError);
}

TEST(FockG2, MonotoneAndBounded) {
  double prev = -1.0;
  for (std::int64_t n = 1; n <= 10000; ++n) {
    const double g = fock_g2(n);
    EXPECT_GT(g, prev);
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 1.0);
    prev = g;
  }
}

TEST(AnalyticG2, ZeroWithoutNoise) {
  for (double xi : {-0.45, -0.2, 0.0, 0.3, 0.49})
    for (double chi : {-0.5, 0.0, 0.5}) EXPECT_EQ(analytic_g2_zero(SimParams(0, xi, chi)), 0.0);
}

TEST(AnalyticG2, SymmetricClosedForm) {
  for (double s = 0; s <= 3.0; s += 0.05) {
    const double expected = 1.0 - 1.0 / ((1 + s) * (1 + s));
    EXPECT_NEAR(analytic_g2_zero(SimParams(s, 0, 0)), expected, 1e-14);
  }
  EXPECT_NEAR(analytic_g2_zero(SimParams(std::sqrt(2.0) - 1.0, 0, 0)), 0.5, 1e-15);
}

TEST(AnalyticG2, OneSidedNoise) {
  EXPECT_NEAR(analytic_g2_zero(SimParams(0.5, 0, 0.5)), 0.5, 1e-15);
  for (double s : {0.1, 0.7, 2.0})
    EXPECT_NEAR(analytic_g2_zero(SimParams(s, 0, 0.5)), 2 * s / (1 + 2 * s), 1e-14);
}

TEST(AnalyticG2, MatchesOutcomeEnumeration) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> sigma(0.0, 3), xi(-0.49, 0.49), chi(-0.5, 0.5),
      eff(0.05, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const SimParams p(sigma(gen), xi(gen), chi(gen), eff(gen));
    const double oracle =
        test::enumerate_outcomes(p.sigma(), p.xi(), p.chi(), p.efficiency()).g2_zero();
    EXPECT_NEAR(analytic_g2_zero(p), oracle, 1e-12 * std::max(1.0, oracle));
  }
}

TEST(AnalyticG2, RelabelingSymmetryIsExact) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> sigma(0.0, 3), xi(-0.49, 0.49), chi(-0.5, 0.5);
  for (int i = 0; i < 5000; ++i) {
    const double s = sigma(gen), x = xi(gen), c = chi(gen);
    EXPECT_EQ(analytic_g2_zero(SimParams(s, x, c)), analytic_g2_zero(SimParams(s, -x, -c)));
  }
}

TEST(AnalyticG2, NonNegativeAndZeroOnlyWithoutNoise) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> sigma(1e-6, 3), xi(-0.49, 0.49), chi(-0.5, 0.5);
  for (int i = 0; i < 5000; ++i) EXPECT_GT(analytic_g2_zero(SimParams(sigma(gen), xi(gen), chi(gen))), 0.0);
}

TEST(AnalyticG2, IncreasingInSigmaWhenSymmetric) {
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double g = analytic_g2_zero(SimParams(0.005 * i, 0, 0));
    EXPECT_GT(g, prev);
    prev = g;
  }
}

}  // namespace
}  // namespace hbt
