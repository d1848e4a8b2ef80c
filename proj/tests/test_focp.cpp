#include <gtest/gtest.h>

#include <cmath>

#include "fracopt/catalog.hpp"
#include "fracopt/errors.hpp"
#include "fracopt/focp.hpp"
#include "fracopt/pipelines.hpp"

using namespace fracopt;

TEST(Focp, ValidateRejectsBadProblems) {
  auto p = example1().problem;
  p.M = 0.0;
  p.N = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = example1().problem;
  p.alpha = 1.2;
  EXPECT_THROW(p.validate(), ValidationError);
  p = example1().problem;
  p.cost_start = -0.5;
  EXPECT_THROW(p.validate(), ValidationError);
  p = example1().problem;
  p.L = nullptr;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_THROW(example2(0.5, 1.2, 1.2).problem.validate(), BracketError);
}

TEST(Focp, TerminalHelpers) {
  const auto e2 = example2();
  EXPECT_TRUE(is_free_time(e2.problem.terminal));
  EXPECT_DOUBLE_EQ(nominal_horizon(e2.problem.terminal), 1.3);
  ASSERT_TRUE(free_time_bracket(e2.problem.terminal));
  EXPECT_FALSE(free_time_bracket(example1().problem.terminal));
  EXPECT_FALSE(describe(e2.problem.terminal).empty());
}

TEST(Focp, Example1AdjointAndControl) {
  const double alpha = 0.5;
  const auto c = assemble_conditions(example1(alpha).problem);
  for (double t : {0.2, 0.7}) {
    const double x = 0.3;
    const double lambda = -0.8;
    const double u = c.control(t, x, lambda);
    EXPECT_NEAR(u, (alpha + 2) * x / t - lambda / (2 * t * t), 1e-14);
    EXPECT_NEAR(c.adjoint_rhs(t, x, u, lambda), -(alpha + 2) / t * lambda, 1e-12);
    EXPECT_NEAR(c.hamiltonian().H_u(t, x, u, lambda), 0.0, 1e-12);
  }
}

TEST(Focp, ImplicitControlMatchesClosedForm) {
  auto p = example1().problem;
  const auto explicit_law = p.control_law;
  p.control_law = nullptr;
  for (double t : {0.3, 0.9}) {
    EXPECT_NEAR(stationary_control(p, t, 0.2, 0.4), explicit_law(t, 0.2, 0.4), 1e-10);
  }
  p.implicit_control = false;
  EXPECT_THROW(stationary_control(p, 0.5, 0.2, 0.4), CapabilityError);
}

TEST(Focp, CompletePartialsByDifferences) {
  auto p = example1().problem;
  const auto L_x = p.L_x;
  p.L_x = nullptr;
  p.f_u = nullptr;
  const auto warnings = complete_partials(p);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_NEAR(p.L_x(0.5, 0.2, 0.3), L_x(0.5, 0.2, 0.3), 1e-6);
  EXPECT_NEAR(p.f_u(0.5, 0.2, 0.3), 1.0, 1e-8);
}

TEST(Focp, TransversalityNamesPerCase) {
  auto p = example1().problem;
  EXPECT_TRUE(assemble_conditions(p).transversality.empty());
  p.terminal = terminal::FixedTimeFreeState{1.0};
  EXPECT_EQ(assemble_conditions(p).transversality, std::vector<std::string>{"costate"});
  p.terminal = terminal::FreeTimeFixedState{1.0, 1.0, 1.6, std::nullopt};
  EXPECT_EQ(assemble_conditions(p).transversality, std::vector<std::string>{"hamiltonian"});
  p.terminal = terminal::FixedTimeInequality{1.0, 0.1};
  EXPECT_EQ(assemble_conditions(p).transversality.size(), 2u);
}

TEST(Focp, FixedFixedHasNoResiduals) {
  const auto c = assemble_conditions(example1().problem);
  EXPECT_EQ(evaluate_transversality(c, {}, 1.0).size(), 0);
}

TEST(Focp, MissingChannelIsIncompleteInput) {
  auto p = example1().problem;
  p.terminal = terminal::FixedTimeFreeState{1.0};
  const auto c = assemble_conditions(p);
  TerminalSample sample;
  sample.x = 0.5;
  EXPECT_THROW(evaluate_transversality(c, sample, 1.0), IncompleteInputError);
}

TEST(Focp, ClassicalLimitTransversality) {
  auto p = lq().problem;
  p.phi = [](double, double x) { return x * x; };
  p.phi_x = [](double, double x) { return 2 * x; };
  p.phi_t = [](double, double) { return 0.0; };
  const auto c = assemble_conditions(p);
  TerminalSample s;
  s.x = 0.25;
  s.lambda = 0.5;
  EXPECT_NEAR(evaluate_transversality(c, s, 1.0)[0], 0.0, 1e-15);
  // Classical adjoint: lambda' = -H_x.
  EXPECT_NEAR(c.adjoint_rhs(0.3, 0.25, -0.1, 0.5), -0.5, 1e-15);
}

TEST(Focp, CostStartAfterAnchorUnsupported) {
  auto p = example1().problem;
  p.cost_start = 0.2;
  EXPECT_THROW(assemble_conditions(p), UnsupportedVariantError);
}

TEST(Focp, FischerBurmeister) {
  EXPECT_NEAR(fischer_burmeister(0.0, 3.0), 0.0, 1e-15);
  EXPECT_NEAR(fischer_burmeister(2.0, 0.0), 0.0, 1e-15);
  EXPECT_LT(fischer_burmeister(-1.0, 1.0), 0.0);
  EXPECT_GT(fischer_burmeister(1.0, 1.0), 0.0);
}

TEST(Sufficiency, Verdicts) {
  const auto e1 = example1().problem;
  Vector mixed(3);
  mixed << -1.0, 0.0, 1.0;
  EXPECT_EQ(check_sufficiency(e1, mixed).verdict, Verdict::Sufficient);

  auto nonlinear = e1;
  nonlinear.f_linear = false;
  EXPECT_EQ(check_sufficiency(nonlinear, mixed).verdict, Verdict::Inconclusive);
  EXPECT_EQ(check_sufficiency(nonlinear, Vector::Ones(3)).verdict, Verdict::Sufficient);

  const auto report = check_sufficiency(example2().problem, Vector::Ones(3));
  EXPECT_EQ(report.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(report.fixed_time);
}

TEST(FractionalShooting, ChannelLayout) {
  const auto c = assemble_conditions(example1().problem);
  ApproximationOptions o;
  o.N = 3;
  const auto sp = fractional_shooting_problem(c, o);
  EXPECT_EQ(sp.dimension, 6);
  EXPECT_EQ(sp.channel_names,
            (std::vector<std::string>{"x", "V2", "V3", "lambda", "W2", "W3"}));
  o.N = 1;
  EXPECT_THROW(fractional_shooting_problem(c, o), ParameterError);
}

TEST(FractionalShooting, ClassicalLimitHasTwoStates) {
  const auto sp = fractional_shooting_problem(assemble_conditions(lq().problem), {});
  EXPECT_EQ(sp.dimension, 2);
}

TEST(Focp, InactiveInequality) {
  // Tracking toward 1 with x(T) >= K, K well below the unconstrained x(T).
  auto entry = tracking(0.5, 1.0);
  PipelineOptions options;
  const auto free = run_pipeline(entry.problem, Pipeline::FractionalConditions, options);
  ASSERT_TRUE(free.solution.converged);
  const double xT = free.x[free.x.size() - 1];
  entry.problem.terminal = terminal::FixedTimeInequality{1.0, xT - 0.2};
  const auto r = run_pipeline(entry.problem, Pipeline::FractionalConditions, options);
  ASSERT_TRUE(r.solution.converged);
  ASSERT_EQ(r.transversality.size(), 2);
  EXPECT_LE(r.transversality[0], 1e-8);
  EXPECT_NEAR(r.transversality[1], 0.0, 1e-8);
  EXPECT_NEAR(r.x[r.x.size() - 1], xT, 1e-8);
}

TEST(Focp, ActiveInequality) {
  auto entry = tracking(0.5, 1.0);
  PipelineOptions options;
  const auto free = run_pipeline(entry.problem, Pipeline::FractionalConditions, options);
  const double K = free.x[free.x.size() - 1] + 0.1;
  entry.problem.terminal = terminal::FixedTimeInequality{1.0, K};
  const auto r = run_pipeline(entry.problem, Pipeline::FractionalConditions, options);
  ASSERT_TRUE(r.solution.converged);
  EXPECT_NEAR(r.x[r.x.size() - 1], K, 1e-8);
  EXPECT_LE(r.transversality[0], 1e-8);
}

TEST(CostStart, ResidualsOfConstantCostate) {
  // lambda = 1: right RL operators of a constant have closed forms.
  const double alpha = 0.5;
  const double A = 0.5;
  const double T = 1.0;
  auto p = tracking(alpha, T).problem;
  p.cost_start = A;
  const Vector t = Vector::LinSpaced(101, 0.0, T);
  const Vector r = cost_start_residuals(p, t, Vector::Ones(101), T);
  ASSERT_EQ(r.size(), 2);
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double s = A * k / 6.0;
    worst = std::max(worst, std::abs(std::pow(T - s, -alpha) - std::pow(A - s, -alpha)) /
                                std::tgamma(1 - alpha));
  }
  EXPECT_NEAR(r[0], worst, 1e-8);
  EXPECT_NEAR(r[1], (std::pow(T, 1 - alpha) - std::pow(A, 1 - alpha)) / std::tgamma(2 - alpha),
              1e-8);
}

TEST(CostStart, SamplesMustCoverHorizon) {
  auto p = tracking().problem;
  p.cost_start = 0.5;
  const Vector t = Vector::LinSpaced(11, 0.0, 0.8);
  EXPECT_THROW(cost_start_residuals(p, t, Vector::Ones(11), 1.0), IncompleteInputError);
}
