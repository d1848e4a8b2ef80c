#pragma once

#include <string>
#include <vector>

#include "fracopt/expansion.hpp"
#include "fracopt/focp.hpp"
#include "fracopt/tpbvp.hpp"

namespace fracopt {

/// Classical problem obtained by replacing the Caputo derivative with the
/// n = 2 expansion. State (x, V_2, ..., V_N):
///
///   x'   = [f - N A s^-alpha x + N sum C_p s^(1-p-alpha) V_p + N x_a s^-alpha / Gamma(1-alpha)]
///          / (M + N B s^(1-alpha)),
///   V_p' = (1 - p) s^(p-2) x,   s = t - a.
///
/// With N = 0 there are no moment states and x' = f / M.
struct ReducedOcp {
  FocpProblem problem;
  LegacyCoefficients coefficients{0.0, 0.0, {}};
  /// Integration starts at a + epsilon (T - a) when moments are present.
  double epsilon = 0.0;

  int moment_count() const { return static_cast<int>(coefficients.C.size()); }
  int dimension() const { return 1 + moment_count(); }

  double denominator(double t) const;
  /// Right-hand side of the state equation for a given control.
  Vector dynamics(double t, const Vector& state, double u) const;
  /// Partial of x' with respect to x at fixed control.
  double dynamics_x(double t, const Vector& state, double u) const;
  /// Initial state at a + epsilon (T - a): x_a and the moments of the constant x_a.
  Vector initial_state(double T) const;
  std::pair<double, double> interval(double T) const;
};

/// Throws ParameterError unless the scheme is the n = 2 layout with the
/// problem's alpha, and SingularReductionError if the denominator vanishes
/// or changes sign on (a, T] (T the largest admissible horizon).
ReducedOcp reduce(const FocpProblem& problem, const ExpansionScheme& scheme,
                  double epsilon = 1e-6);

/// Classical Pontryagin system of a reduced problem: costates lambda_1 (for x)
/// and lambda_2..lambda_N (for the moments), with
///
///   lambda_1' = -L_x - lambda_1 (f_x - N A s^-alpha) / den + sum (p-1) s^(p-2) lambda_p,
///   lambda_p' = -lambda_1 N C_p s^(1-p-alpha) / den,
///
/// the control from L_u + (lambda_1 / den) f_u = 0, lambda_p(T) = 0 and the
/// terminal conditions of the original problem.
struct ReducedConditions {
  ReducedOcp ocp;
  std::vector<std::string> transversality;

  int dimension() const { return 2 * ocp.dimension(); }
  double control(double t, const Vector& y) const;
  /// Full 2N-dimensional field.
  Vector field(double t, const Vector& y) const;
  /// H = L + lambda_1 x' + sum lambda_p V_p'.
  double hamiltonian(double t, const Vector& y) const;
  /// Coefficients phi_0..phi_{N+1} of the state equation written as
  /// x' = 2 phi_0 lambda_1 + phi_1 x + sum phi_p V_p + phi_{N+1},
  /// obtained by differencing the closed-loop state equation at y.
  Vector phi(double t, const Vector& y) const;
  /// Classical transversality residuals at the end state, ordered as
  /// `transversality` (an inequality terminal gives the inequality and the product).
  Vector evaluate_transversality(double t, const Vector& y) const;

  ShootingProblem shooting_problem() const;
  std::vector<std::string> channel_names() const;
};

/// Throws CapabilityError when the control cannot be eliminated (no control
/// law and implicit solves disabled).
ReducedConditions classical_conditions(const ReducedOcp& reduced, const TerminalSpec& terminal);

}  // namespace fracopt
