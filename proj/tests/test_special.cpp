#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

using namespace fracopt;

namespace {

// Gamma(x) from Gamma(0.5) = sqrt(pi) and the recurrence, for half-integers.
double half_integer_gamma(int twice_x) {
  double g = std::sqrt(std::numbers::pi);
  for (int k = 1; k < twice_x; k += 2) g *= 0.5 * k;
  return g;
}

}  // namespace

TEST(Gamma, Values) {
  EXPECT_DOUBLE_EQ(fracopt::gamma(1.0), 1.0);
  EXPECT_NEAR(fracopt::gamma(0.5), 1.7724538509055160, 1e-14);
  EXPECT_NEAR(fracopt::gamma(4.5), 11.631728396567450, 1e-12);
  EXPECT_DOUBLE_EQ(fracopt::gamma(5.0), 24.0);
}

TEST(Gamma, HalfIntegersAgainstRecurrence) {
  for (int twice = 1; twice <= 41; twice += 2) {
    const double expected = half_integer_gamma(twice);
    EXPECT_NEAR(fracopt::gamma(0.5 * twice), expected, 1e-13 * expected) << twice;
  }
}

TEST(Gamma, AgreesWithStdTgamma) {
  for (double x = -9.75; x < 60.0; x += 0.37) {
    if (std::abs(x - std::round(x)) < 1e-9 && x <= 0.0) continue;
    const double ref = std::tgamma(x);
    EXPECT_NEAR(fracopt::gamma(x), ref, 1e-12 * std::abs(ref)) << x;
  }
}

TEST(Gamma, ReflectionIdentity) {
  for (double x : {0.1, 0.25, 0.3, 0.7, 0.9}) {
    EXPECT_NEAR(fracopt::gamma(x) * fracopt::gamma(1.0 - x), std::numbers::pi / std::sin(std::numbers::pi * x),
                1e-12);
  }
}

TEST(Gamma, PolesAndOverflow) {
  EXPECT_THROW(fracopt::gamma(0.0), DomainError);
  EXPECT_THROW(fracopt::gamma(-3.0), DomainError);
  EXPECT_THROW(fracopt::gamma(200.0), OverflowError);
  EXPECT_EQ(reciprocal_gamma(-2.0), 0.0);
  EXPECT_NEAR(reciprocal_gamma(0.5), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
}

TEST(FracBinomial, Values) {
  EXPECT_DOUBLE_EQ(frac_binomial(0.5, 0), 1.0);
  EXPECT_DOUBLE_EQ(frac_binomial(0.5, 1), 0.5);
  EXPECT_DOUBLE_EQ(frac_binomial(0.5, 2), -0.125);
  EXPECT_DOUBLE_EQ(frac_binomial(0.5, 3), 0.0625);
}

TEST(FracBinomial, IntegerAlphaTerminates) {
  EXPECT_DOUBLE_EQ(frac_binomial(3.0, 2), 3.0);
  EXPECT_EQ(frac_binomial(3.0, 4), 0.0);
  EXPECT_EQ(frac_binomial(1.0, 2), 0.0);
}

TEST(FracBinomial, MatchesGammaRatio) {
  for (double a : {0.2, 0.5, 1.7}) {
    for (int k = 0; k < 8; ++k) {
      const double ref = std::tgamma(a + 1) / (std::tgamma(k + 1.0) * std::tgamma(a - k + 1));
      EXPECT_NEAR(frac_binomial(a, k), ref, 1e-12 * (1 + std::abs(ref)));
    }
  }
}

TEST(SinPi, ExactZeros) {
  EXPECT_EQ(sin_pi(3.0), 0.0);
  EXPECT_EQ(sin_pi(-2.0), 0.0);
  EXPECT_NEAR(sin_pi(0.5), 1.0, 1e-16);
  EXPECT_NEAR(sin_pi(0.25), std::sqrt(0.5), 1e-15);
}
