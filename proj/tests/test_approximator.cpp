#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracopt/approximator.hpp"
#include "fracopt/errors.hpp"

using namespace fracopt;

namespace {

SampledFunction t4() {
  return SampledFunction([](double t) { return std::pow(t, 4); }, 0.0, 1.0,
                         {[](double t) { return 4 * std::pow(t, 3); },
                          [](double t) { return 12 * t * t; },
                          [](double t) { return 24 * t; },
                          [](double t) { return 24.0; },
                          [](double) { return 0.0; }});
}

double t4_rl(double alpha, double t) {
  return 24.0 / std::tgamma(5.0 - alpha) * std::pow(t, 4.0 - alpha);
}

SampledFunction exp2t() {
  std::vector<SampledFunction::Fn> d;
  for (int k = 1; k <= 10; ++k) d.push_back([k](double t) { return std::pow(2.0, k) * std::exp(2 * t); });
  return SampledFunction([](double t) { return std::exp(2 * t); }, 0.0, 1.0, d);
}

// t^-alpha sum (2t)^k / Gamma(k + 1 - alpha)
double exp2t_rl(double alpha, double t) {
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) sum += std::pow(2 * t, k) / std::tgamma(k + 1 - alpha);
  return sum * std::pow(t, -alpha);
}

}  // namespace

TEST(Grid, Nodes) {
  const auto g = Grid::make(0.0, 1.0, 5);
  EXPECT_DOUBLE_EQ(g.node(4), 1.0);
  EXPECT_DOUBLE_EQ(g.step(), 0.25);
  EXPECT_EQ(g.nodes().size(), 5);
  EXPECT_THROW(Grid::make(1.0, 1.0, 5), ParameterError);
  EXPECT_THROW(Grid::make(0.0, 1.0, 1), ParameterError);
}

TEST(Approximator, T4ErrorDecreasesInN) {
  const auto x = t4();
  const auto grid = Grid::make(0.0, 1.0, 101);
  const auto oracle = [](double t) { return t4_rl(0.5, t); };
  double previous = INFINITY;
  for (int N : {2, 4, 6}) {
    const auto run = approximate_rl_derivative(x, ExpansionScheme::build(0.5, 2, N), grid, oracle);
    const double end_error = run.abs_error()[100];
    EXPECT_LT(end_error, previous) << N;
    previous = end_error;
  }
}

TEST(Approximator, ConstantReproduced) {
  const double c = 2.5;
  SampledFunction x([c](double) { return c; }, 0.0, 1.0, {[](double) { return 0.0; }});
  const auto grid = Grid::make(0.0, 1.0, 51);
  const auto run = approximate_rl_derivative(
      x, ExpansionScheme::build(0.5, 2, 5), grid,
      [c](double t) { return c / std::sqrt(t) / std::sqrt(std::numbers::pi); });
  EXPECT_LE(run.max_abs_error, 1e-10);
}

TEST(Approximator, Exp2tErrorDecreasesInn) {
  const auto x = exp2t();
  const auto grid = Grid::make(0.0, 1.0, 101);
  const auto oracle = [](double t) { return exp2t_rl(0.5, t); };
  double previous = INFINITY;
  for (int n : {1, 2, 3}) {
    const auto run = approximate_rl_derivative(x, ExpansionScheme::build(0.5, n, 6), grid, oracle);
    EXPECT_LT(run.max_abs_error, previous) << n;
    previous = run.max_abs_error;
  }
}

TEST(Approximator, CaputoEqualsRLWhenStartIsZero) {
  const auto x = t4();
  const auto grid = Grid::make(0.0, 1.0, 41);
  const auto scheme = ExpansionScheme::build(0.5, 2, 4);
  const auto rl = approximate_rl_derivative(x, scheme, grid);
  const auto cap = approximate_caputo_derivative(x, scheme, grid);
  for (int i = 1; i < grid.m; ++i) EXPECT_DOUBLE_EQ(rl.values[i], cap.values[i]);
}

TEST(Approximator, CaputoOfConstantVanishes) {
  SampledFunction x([](double) { return 4.0; }, 0.0, 1.0, {[](double) { return 0.0; }});
  const auto run = approximate_caputo_derivative(x, ExpansionScheme::build(0.5, 2, 3),
                                                 Grid::make(0.0, 1.0, 21));
  for (int i = 1; i < 21; ++i) EXPECT_NEAR(run.values[i], 0.0, 1e-10);
}

TEST(Approximator, CaputoOfExactStateNearSquare) {
  const double alpha = 0.5;
  const double c = 2.0 / std::tgamma(alpha + 3);
  SampledFunction x([=](double t) { return c * std::pow(t, alpha + 2); }, 0.0, 1.0,
                    {[=](double t) { return c * (alpha + 2) * std::pow(t, alpha + 1); },
                     [=](double t) { return c * (alpha + 2) * (alpha + 1) * std::pow(t, alpha); }});
  const auto grid = Grid::make(0.0, 1.0, 101);
  const auto scheme = ExpansionScheme::build(alpha, 2, 6);
  const auto run = approximate_caputo_derivative(x, scheme, grid, [](double t) { return t * t; });
  // L_2 = max |x''| on [0, 1]
  const double L2 = c * (alpha + 2) * (alpha + 1);
  EXPECT_LE(run.max_abs_error, truncation_error_bound(scheme, L2, 1.0) + 1e-8);
}

TEST(Approximator, ErrorBoundCertificate) {
  const auto x = t4();
  const auto grid = Grid::make(0.0, 1.0, 101);
  const auto scheme = ExpansionScheme::build(0.5, 2, 6);
  const auto run = approximate_rl_derivative(x, scheme, grid, [](double t) { return t4_rl(0.5, t); });
  const auto err = run.abs_error();
  for (int i = 1; i < grid.m; ++i) {
    const double t = grid.node(i);
    EXPECT_LE(err[i], truncation_error_bound(scheme, 12.0 * t * t, t) + 1e-8) << t;
  }
}

TEST(Approximator, RightMirrorsLeft) {
  const auto x = exp2t();
  const auto grid = Grid::make(0.0, 1.0, 51);
  const auto right =
      approximate_rl_derivative(x, ExpansionScheme::build(0.5, 2, 4, Side::Right), grid);
  const auto left =
      approximate_rl_derivative(x.reflected(), ExpansionScheme::build(0.5, 2, 4), grid);
  for (int i = 0; i + 1 < grid.m; ++i) {
    EXPECT_NEAR(right.values[i], left.values[grid.m - 1 - i], 1e-10) << i;
  }
}

TEST(Approximator, AnchorMismatchRejected) {
  EXPECT_THROW(approximate_rl_derivative(t4(), ExpansionScheme::build(0.5, 2, 4),
                                         Grid::make(0.1, 1.0, 11)),
               ParameterError);
}

TEST(ClassicalSeries, PolynomialTerminates) {
  const auto run = approximate_classical_series(t4(), 0.5, 4, Grid::make(0.0, 1.0, 21),
                                                [](double t) { return t4_rl(0.5, t); });
  EXPECT_LE(run.max_abs_error, 1e-10);
}

TEST(ClassicalSeries, ConstantSingleTerm) {
  SampledFunction x([](double) { return 3.0; }, 0.0, 1.0);
  const auto run = approximate_classical_series(x, 0.5, 0, Grid::make(0.0, 1.0, 11));
  EXPECT_NEAR(run.values[5], 3.0 / std::sqrt(0.5) / std::sqrt(std::numbers::pi), 1e-13);
}

TEST(ClassicalSeries, MoreTermsHelp) {
  const auto grid = Grid::make(0.0, 1.0, 11);
  const auto oracle = [](double t) { return exp2t_rl(0.5, t); };
  const auto n3 = approximate_classical_series(exp2t(), 0.5, 3, grid, oracle);
  const auto n6 = approximate_classical_series(exp2t(), 0.5, 6, grid, oracle);
  EXPECT_LT(n6.abs_error()[10], n3.abs_error()[10]);
}

TEST(ClassicalSeries, MissingDerivativesWithoutFallback) {
  SampledFunction x([](double t) { return t; }, 0.0, 1.0);
  x.set_finite_difference_fallback(false);
  EXPECT_THROW(approximate_classical_series(x, 0.5, 2, Grid::make(0.0, 1.0, 5)), CapabilityError);
}

TEST(ApproximationRun, CsvColumns) {
  const auto run = approximate_rl_derivative(t4(), ExpansionScheme::build(0.5, 2, 2),
                                             Grid::make(0.0, 1.0, 3),
                                             [](double t) { return t4_rl(0.5, t); });
  const std::string csv = run.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,exact,approx,abs_error");
}
