#include <gtest/gtest.h>

#include <cmath>

#include "fracopt/catalog.hpp"
#include "fracopt/errors.hpp"
#include "fracopt/reduction.hpp"

using namespace fracopt;

namespace {

ReducedOcp reduced_example1(int N, double alpha = 0.5) {
  return reduce(example1(alpha).problem, ExpansionScheme::build(alpha, 2, N));
}

}  // namespace

TEST(Reduction, Example1TwoStates) {
  const auto r = reduced_example1(2);
  EXPECT_EQ(r.dimension(), 2);
  Vector state(2);
  state << 0.3, 0.1;
  // V2' = -x
  EXPECT_DOUBLE_EQ(r.dynamics(0.5, state, 0.0)[1], -0.3);
}

TEST(Reduction, ClassicalLimit) {
  const auto p = lq().problem;
  const auto r = reduce(p, ExpansionScheme::build(p.alpha, 2, 4));
  EXPECT_EQ(r.moment_count(), 0);
  EXPECT_EQ(r.epsilon, 0.0);
  Vector state(1);
  state << 0.7;
  EXPECT_DOUBLE_EQ(r.dynamics(0.5, state, -0.2)[0], -0.2);
  EXPECT_EQ(r.interval(2.0), (std::pair{0.0, 2.0}));
}

TEST(Reduction, ExactStateThroughReducedDynamics) {
  const double alpha = 0.5;
  const int N = 4;
  const auto r = reduced_example1(N, alpha);
  const auto e = example1(alpha);
  const double c = 2.0 / std::tgamma(alpha + 3);
  const auto scheme = ExpansionScheme::build(alpha, 2, N);
  const double L2 = c * (alpha + 2) * (alpha + 1);
  for (double t : {0.1, 0.4, 0.8, 1.0}) {
    Vector state(N);
    state[0] = e.exact_x(t);
    for (int p = 2; p <= N; ++p) {
      state[p - 1] = (1.0 - p) * c * std::pow(t, p + alpha + 1) / (p + alpha + 1);
    }
    const double xdot = c * (alpha + 2) * std::pow(t, alpha + 1);
    const double rhs = r.dynamics(t, state, e.exact_u(t))[0];
    EXPECT_LE(std::abs(rhs - xdot), truncation_error_bound(scheme, L2, t) + 1e-10) << t;
  }
}

TEST(Reduction, InitialStateAtShiftedStart) {
  auto p = tracking(0.5, 1.0).problem;
  p.x_a = 2.0;
  const auto r = reduce(p, ExpansionScheme::build(0.5, 2, 3), 1e-3);
  const auto [t0, t1] = r.interval(1.0);
  EXPECT_NEAR(t0, 1e-3, 1e-15);
  EXPECT_EQ(t1, 1.0);
  const Vector y0 = r.initial_state(1.0);
  EXPECT_EQ(y0[0], 2.0);
  // Moments of the constant x_a over [0, t0]: (1 - p) x_a t0^(p-1) / (p - 1) = -x_a t0^(p-1).
  EXPECT_NEAR(y0[1], -2.0 * 1e-3, 1e-15);
  EXPECT_NEAR(y0[2], -2.0 * 1e-6, 1e-18);
}

TEST(Reduction, Errors) {
  const auto p = example1().problem;
  EXPECT_THROW(reduce(p, ExpansionScheme::build(0.5, 3, 4)), ParameterError);
  EXPECT_THROW(reduce(p, ExpansionScheme::build(0.4, 2, 4)), ParameterError);
  EXPECT_THROW(reduce(p, ExpansionScheme::build(0.5, 2, 4, Side::Right)), ParameterError);

  auto late = p;
  late.cost_start = 0.3;
  EXPECT_THROW(reduce(late, ExpansionScheme::build(0.5, 2, 4)), UnsupportedVariantError);

  auto singular = p;
  singular.M = -0.5 * ExpansionScheme::build(0.5, 2, 2).legacy().B;
  EXPECT_THROW(reduce(singular, ExpansionScheme::build(0.5, 2, 2)), SingularReductionError);
}

TEST(ReducedConditions, Example2FourStates) {
  const auto p = example2().problem;
  const auto c = classical_conditions(reduce(p, ExpansionScheme::build(0.5, 2, 2)), p.terminal);
  EXPECT_EQ(c.dimension(), 4);
  EXPECT_EQ(c.channel_names(),
            (std::vector<std::string>{"x", "V2", "lambda1", "lambda2"}));
  EXPECT_EQ(c.transversality, std::vector<std::string>{"hamiltonian"});
  // lambda2' = -phi_2 lambda1 with phi_2 the V2 coefficient of x'.
  Vector y(4);
  y << 0.2, -0.05, 0.3, 0.1;
  const double t = 0.6;
  const Vector phi = c.phi(t, y);
  EXPECT_NEAR(c.field(t, y)[3], -phi[2] * y[2], 1e-6);
}

TEST(ReducedConditions, Example1SixStates) {
  const auto p = example1().problem;
  const auto c = classical_conditions(reduce(p, ExpansionScheme::build(0.5, 2, 3)), p.terminal);
  EXPECT_EQ(c.dimension(), 6);
  const auto sp = c.shooting_problem();
  EXPECT_EQ(sp.unknown_count(), 3);
  EXPECT_EQ(sp.known_initial.size(), 3u);
  EXPECT_FALSE(sp.free_time.has_value());
}

TEST(ReducedConditions, HamiltonianIsCostPlusCostates) {
  const auto p = example1().problem;
  const auto c = classical_conditions(reduce(p, ExpansionScheme::build(0.5, 2, 2)), p.terminal);
  Vector y(4);
  y << 0.2, -0.05, 0.3, 0.1;
  const double t = 0.6;
  const double u = c.control(t, y);
  const Vector dyn = c.ocp.dynamics(t, y.head(2), u);
  EXPECT_NEAR(c.hamiltonian(t, y), p.L(t, y[0], u) + y[2] * dyn[0] + y[3] * dyn[1], 1e-14);
}

TEST(ReducedConditions, NeedsAControl) {
  auto p = example1().problem;
  p.control_law = nullptr;
  p.implicit_control = false;
  const auto r = reduce(p, ExpansionScheme::build(0.5, 2, 2));
  EXPECT_THROW(classical_conditions(r, p.terminal), CapabilityError);
}

TEST(ReducedConditions, LqMatchesRiccati) {
  // p' = p^2 - 1, p(T) = 0 gives p = tanh(T - t); closed loop x' = -p x.
  const auto e = lq(1.0, 1.0);
  const auto c = classical_conditions(reduce(e.problem, ExpansionScheme::build(0.5, 2, 2)),
                                      e.problem.terminal);
  const auto sol = solve_shooting(c.shooting_problem());
  ASSERT_TRUE(sol.converged);
  const int m = 2001;
  Vector p(m);
  p[m - 1] = 0.0;
  const double h = 1.0 / (m - 1);
  const Field riccati = [](double, const Vector& y) {
    return Vector(Vector::Constant(1, y[0] * y[0] - 1.0));
  };
  Vector y = Vector::Zero(1);
  for (int i = m - 1; i > 0; --i) {
    y = rk4_step(riccati, i * h, y, -h);
    p[i - 1] = y[0];
  }
  // closed loop on the Riccati grid, compared at the shooting nodes t = k / 1000
  double x = 1.0;
  double worst = 0.0;
  for (int i = 0; i + 1 < m; i += 2) {
    const int k = i / 2;
    worst = std::max(worst, std::abs(x - sol.trajectory.states(k, 0)));
    const double k1 = -p[i] * x;
    const double k2 = -p[i + 1] * (x + h * k1);
    const double k3 = -p[i + 1] * (x + h * k2);
    const double k4 = -p[i + 2] * (x + 2 * h * k3);
    x += (2 * h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  EXPECT_LE(worst, 1e-9);
}
