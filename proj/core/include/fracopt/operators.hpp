#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracopt {

/// Order alpha > 0 together with n = [alpha] + 1 (n = alpha for integer alpha).
struct FractionalOrder {
  double alpha;
  int n;

  /// Throws ParameterError unless alpha is finite and positive.
  static FractionalOrder of(double alpha);
  bool is_integer() const { return static_cast<double>(n) == alpha; }
};

/// Scalar function on [a, b] with optional derivative callables.
///
/// derivative(k, t) uses the k-th callable when present, otherwise a central
/// finite difference with step (b - a) * 1e-5 if the fallback is enabled.
/// Expect roughly 1e-5 relative accuracy from the fallback.
class SampledFunction {
 public:
  using Fn = std::function<double(double)>;

  SampledFunction(Fn value, double a, double b, std::vector<Fn> derivatives = {});

  double operator()(double t) const { return value_(t); }
  double derivative(int k, double t) const;
  bool has_derivative(int k) const;
  int derivative_count() const { return static_cast<int>(derivatives_.size()); }

  double a() const { return a_; }
  double b() const { return b_; }

  SampledFunction& set_finite_difference_fallback(bool enabled) {
    fd_fallback_ = enabled;
    return *this;
  }
  bool finite_difference_fallback() const { return fd_fallback_; }

  /// Spot-checks each derivative callable against finite differences of the
  /// previous order; returns false if any check exceeds 1e-4 * scale.
  bool derivatives_consistent(int samples = 7) const;

  /// x(a + b - t) on the same interval; derivative k picks up (-1)^k.
  SampledFunction reflected() const;

 private:
  Fn value_;
  std::vector<Fn> derivatives_;
  double a_;
  double b_;
  bool fd_fallback_ = true;
};

enum class OperatorKind {
  LeftRLIntegral,
  RightRLIntegral,
  LeftRLDerivative,
  RightRLDerivative,
  LeftCaputo,
  RightCaputo,
};

std::string to_string(OperatorKind kind);

/// Left Riemann-Liouville integral of order alpha > 0 anchored at a.
double rl_integral_left(const SampledFunction& x, double alpha, double a, double t);
/// Right Riemann-Liouville integral of order alpha > 0 anchored at b.
double rl_integral_right(const SampledFunction& x, double alpha, double b, double t);

/// Left Caputo derivative; reduces to x^(n)(t) for integer alpha.
double caputo_derivative_left(const SampledFunction& x, double alpha, double a, double t);
double caputo_derivative_right(const SampledFunction& x, double alpha, double b, double t);

/// Riemann-Liouville derivatives, evaluated as the Caputo value plus the
/// boundary terms sum_k x^(k)(anchor) |t - anchor|^(k-alpha) / Gamma(k-alpha+1)
/// (with (-1)^k on the right side).
double rl_derivative_left(const SampledFunction& x, double alpha, double a, double t);
double rl_derivative_right(const SampledFunction& x, double alpha, double b, double t);

/// Dispatch by kind; `anchor` is a for left operators and b for right ones.
double apply_operator(OperatorKind kind, const SampledFunction& x, double alpha, double anchor,
                      double t);

/// Closed forms for power functions (t - a)^beta, beta > -1, anchored at a.
double power_rule_integral(double alpha, double beta, double s);
double power_rule_rl_derivative(double alpha, double beta, double s);
/// Caputo derivative of (t - a)^beta for beta > n - 1 (beta not an integer below n).
double power_rule_caputo(double alpha, double beta, double s);

struct PropertyCheckOptions {
  /// Second order used by the semigroup property.
  double beta = 0.25;
  /// Partner function for integration by parts; defaults to y(t) = t.
  std::optional<SampledFunction> partner;
  /// Interior sample points; defaults to five points in [a + 0.2(b-a), b].
  std::vector<double> sample_points;
  /// Step for the finite-difference route to the RL derivative (property 1).
  double fd_step = 1e-3;
};

struct PropertyReport {
  /// Residuals of: Caputo/RL relation, semigroup, left inverse,
  /// integral of Caputo, integration by parts.
  std::array<double, 5> residuals{};
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::vector<std::string> notes;
};

/// Numerically evaluates the five basic calculus identities for x on [a, b].
/// Integration by parts is checked for n = 1 only (alpha in (0, 1)).
PropertyReport check_calculus_properties(const SampledFunction& x, double alpha, double a,
                                         double b, double tol,
                                         const PropertyCheckOptions& options = {});

}  // namespace fracopt
