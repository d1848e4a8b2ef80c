#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracopt/expansion.hpp"
#include "fracopt/tpbvp.hpp"

namespace fracopt {

using Fn3 = std::function<double(double t, double x, double u)>;
using Fn2 = std::function<double(double t, double x)>;
/// Solves L_u(t, x, u) + mu * f_u(t, x, u) = 0 for u.
using ControlLaw = std::function<double(double t, double x, double mu)>;

namespace terminal {

struct FreeTimeFreeState {
  double lower;
  double upper;
  std::optional<double> guess;
};
/// Fixed horizon, free end state.
struct FixedTimeFreeState {
  double T;
};
/// Free horizon, prescribed end state.
struct FreeTimeFixedState {
  double x_T;
  double lower;
  double upper;
  std::optional<double> guess;
};
/// Fixed horizon and end state.
struct FixedTimeFixedState {
  double T;
  double x_T;
};
/// x(T) = gamma(T) on a free horizon.
struct Curve {
  std::function<double(double)> gamma;
  std::function<double(double)> gamma_dot;
  double lower;
  double upper;
  std::optional<double> guess;
};
/// x(T) >= K at a fixed horizon.
struct FixedTimeInequality {
  double T;
  double K;
};

}  // namespace terminal

using TerminalSpec =
    std::variant<terminal::FreeTimeFreeState, terminal::FixedTimeFreeState,
                 terminal::FreeTimeFixedState, terminal::FixedTimeFixedState, terminal::Curve,
                 terminal::FixedTimeInequality>;

bool is_free_time(const TerminalSpec& spec);
/// Fixed horizon, or the bracket midpoint (or guess) for free-time variants.
double nominal_horizon(const TerminalSpec& spec);
/// Bracket for free-time variants.
std::optional<FreeTime> free_time_bracket(const TerminalSpec& spec);
std::string describe(const TerminalSpec& spec);

/// Scalar problem: minimize int_A^T L dt + phi(T, x(T)) subject to
/// M x' + N cD^alpha x = f(t, x, u), x(a) = x_a.
struct FocpProblem {
  double alpha = 0.5;
  double a = 0.0;
  /// Start of the cost integral; A > a is representable but not solvable.
  std::optional<double> cost_start;
  double M = 1.0;
  double N = 1.0;
  double x_a = 0.0;

  Fn3 L, L_x, L_u;
  Fn3 f, f_x, f_u;
  /// Terminal cost; empty means zero.
  Fn2 phi, phi_t, phi_x;

  TerminalSpec terminal = terminal::FixedTimeFreeState{1.0};

  /// Closed-form stationary control. When empty, an inner safeguarded Newton
  /// solve is used if implicit_control is set.
  ControlLaw control_law;
  bool implicit_control = true;
  double control_guess = 0.0;

  /// Hypotheses for the sufficiency report, declared by the caller.
  bool L_convex = false;
  bool f_convex = false;
  bool f_linear = false;
  bool phi_convex = true;

  double A() const { return cost_start.value_or(a); }
  /// Throws ValidationError on (M, N) = (0, 0), alpha outside (0, 1), A < a
  /// or missing L / f.
  void validate() const;
};

/// Fills missing partial derivatives with central differences
/// (h = 1e-6 * (1 + |arg|)); returns one warning per filled partial.
std::vector<std::string> complete_partials(FocpProblem& problem);

/// H = L + lambda f.
class Hamiltonian {
 public:
  explicit Hamiltonian(const FocpProblem& problem) : problem_(&problem) {}

  double value(double t, double x, double u, double lambda) const;
  double H_x(double t, double x, double u, double lambda) const;
  double H_u(double t, double x, double u, double lambda) const;
  double H_lambda(double t, double x, double u, double lambda) const;

 private:
  const FocpProblem* problem_;
};

/// Stationary control u solving L_u + mu f_u = 0 at (t, x).
/// Throws CapabilityError when no control law is given and implicit solves
/// are disabled, or when the inner Newton iteration fails.
double stationary_control(const FocpProblem& problem, double t, double x, double mu);

/// Values at the terminal time needed by the transversality conditions.
struct TerminalSample {
  std::optional<double> t;
  std::optional<double> x;
  std::optional<double> u;
  std::optional<double> lambda;
  std::optional<double> x_dot;
  std::optional<double> caputo_x;
  /// Right integral of order 1 - alpha of lambda at t = T (0 in the limit).
  double right_integral_lambda = 0.0;
};

/// Fractional necessary conditions of a problem with A = a.
struct OptimalityConditions {
  FocpProblem problem;
  std::vector<std::string> transversality;
  std::vector<std::string> warnings;

  double control(double t, double x, double lambda) const {
    return stationary_control(problem, t, x, lambda);
  }
  /// Right-hand side -H_x of the adjoint equation M lambda' - N tD_T^alpha lambda = -H_x.
  double adjoint_rhs(double t, double x, double u, double lambda) const;
  Hamiltonian hamiltonian() const { return Hamiltonian(problem); }
};

/// Throws UnsupportedVariantError when the cost starts after the derivative anchor.
OptimalityConditions assemble_conditions(FocpProblem problem);

/// Transversality residuals ordered as `conditions.transversality`.
/// The inequality terminal yields the pair (M lambda + N I lambda - phi_x, which must be
/// <= 0, and its product with x(T) - K).
Vector evaluate_transversality(const OptimalityConditions& conditions,
                               const TerminalSample& sample, double T);

/// Fischer-Burmeister residual a + b - sqrt(a^2 + b^2): zero iff a, b >= 0 and ab = 0.
double fischer_burmeister(double a, double b);

enum class Verdict { Sufficient, Inconclusive };

struct SufficiencyReport {
  bool convexity = false;
  bool fixed_time = false;
  bool lambda_nonnegative = false;
  bool f_linear = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

/// Checks the convexity, fixed-time and sign/linearity hypotheses against a
/// candidate costate sampled on a grid.
SufficiencyReport check_sufficiency(const FocpProblem& problem, const Vector& lambda_samples);

/// Options shared by both solution pipelines.
struct ApproximationOptions {
  /// Truncation of the n = 2 expansion.
  int N = 2;
  /// Relative shift eps * (T - a) away from singular end points.
  double epsilon = 1e-6;
};

/// Shooting problem for the fractional conditions with the left Caputo
/// derivative and the right RL derivative both replaced by the n = 2
/// expansion. State: x, V_2..V_N, lambda, W_2..W_N. With N = 0 in the
/// dynamics this is the classical Pontryagin system in (x, lambda).
ShootingProblem fractional_shooting_problem(const OptimalityConditions& conditions,
                                            const ApproximationOptions& options);

/// Residuals of the two extra conditions that appear when the cost starts
/// at A > a, for a costate sampled on `times`:
///   r[0] = max over nodes in [a, A] of |tD_T^alpha lambda - tD_A^alpha lambda|,
///   r[1] = [tI_T^(1-alpha) lambda - tI_A^(1-alpha) lambda] at t = a.
/// These are reported, never enforced.
Vector cost_start_residuals(const FocpProblem& problem, const Vector& times,
                            const Vector& lambda, double T);

}  // namespace fracopt
