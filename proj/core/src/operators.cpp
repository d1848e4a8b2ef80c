#include "fracopt/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracopt/errors.hpp"
#include "fracopt/quadrature.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

FractionalOrder FractionalOrder::of(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ParameterError("fractional order must be finite and positive");
  }
  const double floor_alpha = std::floor(alpha);
  const int n = floor_alpha == alpha ? static_cast<int>(alpha) : static_cast<int>(floor_alpha) + 1;
  return {alpha, n};
}

SampledFunction::SampledFunction(Fn value, double a, double b, std::vector<Fn> derivatives)
    : value_(std::move(value)), derivatives_(std::move(derivatives)), a_(a), b_(b) {
  if (!value_) throw ParameterError("SampledFunction: empty value callable");
  if (!(a_ < b_)) throw ParameterError("SampledFunction: domain requires a < b");
  for (const auto& d : derivatives_) {
    if (!d) throw ParameterError("SampledFunction: empty derivative callable");
  }
}

bool SampledFunction::has_derivative(int k) const {
  return k == 0 || (k > 0 && k <= static_cast<int>(derivatives_.size()));
}

double SampledFunction::derivative(int k, double t) const {
  if (k < 0) throw ParameterError("derivative order must be non-negative");
  if (k == 0) return value_(t);
  if (k <= static_cast<int>(derivatives_.size())) return derivatives_[k - 1](t);
  if (!fd_fallback_) {
    std::ostringstream os;
    os << "derivative of order " << k << " requested but only " << derivatives_.size()
       << " callables supplied and finite-difference fallback is disabled";
    throw CapabilityError(os.str());
  }
  // Difference the highest available callable m more times.
  const int base = static_cast<int>(derivatives_.size());
  const int m = k - base;
  const double h = (b_ - a_) * 1e-5;
  double sum = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= m; ++i) {
    const double shift = (0.5 * m - i) * h;
    const double g = base == 0 ? value_(t + shift) : derivatives_[base - 1](t + shift);
    sum += ((i % 2 == 0) ? binom : -binom) * g;
    binom = binom * (m - i) / (i + 1);
  }
  return sum / std::pow(h, m);
}

bool SampledFunction::derivatives_consistent(int samples) const {
  const double h = (b_ - a_) * 1e-5;
  for (int k = 1; k <= static_cast<int>(derivatives_.size()); ++k) {
    const auto& lower = [&](double t) { return k == 1 ? value_(t) : derivatives_[k - 2](t); };
    for (int i = 0; i < samples; ++i) {
      const double t = a_ + (b_ - a_) * (i + 0.5) / samples;
      const double fd = (lower(t + h) - lower(t - h)) / (2.0 * h);
      const double exact = derivatives_[k - 1](t);
      const double scale = std::max({1.0, std::abs(exact), std::abs(lower(t))});
      if (std::abs(fd - exact) > 1e-4 * scale) return false;
    }
  }
  return true;
}

SampledFunction SampledFunction::reflected() const {
  const double sum = a_ + b_;
  auto value = value_;
  std::vector<Fn> derivatives;
  derivatives.reserve(derivatives_.size());
  for (std::size_t k = 0; k < derivatives_.size(); ++k) {
    auto d = derivatives_[k];
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // order k + 1
    derivatives.emplace_back([d, sum, sign](double t) { return sign * d(sum - t); });
  }
  SampledFunction out([value, sum](double t) { return value(sum - t); }, a_, b_,
                      std::move(derivatives));
  out.set_finite_difference_fallback(fd_fallback_);
  return out;
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::LeftRLIntegral: return "left-rl-integral";
    case OperatorKind::RightRLIntegral: return "right-rl-integral";
    case OperatorKind::LeftRLDerivative: return "left-rl-derivative";
    case OperatorKind::RightRLDerivative: return "right-rl-derivative";
    case OperatorKind::LeftCaputo: return "left-caputo";
    case OperatorKind::RightCaputo: return "right-caputo";
  }
  return "unknown";
}

namespace {

void check_left(const SampledFunction& x, double a, double t, const char* who) {
  if (a < x.a() || t > x.b() || t < a) {
    std::ostringstream os;
    os << who << ": need x.a() <= a <= t <= x.b(), got a = " << a << ", t = " << t
       << " on [" << x.a() << ", " << x.b() << "]";
    throw DomainError(os.str());
  }
}

void check_right(const SampledFunction& x, double b, double t, const char* who) {
  if (b > x.b() || t < x.a() || t > b) {
    std::ostringstream os;
    os << who << ": need x.a() <= t <= b <= x.b(), got b = " << b << ", t = " << t
       << " on [" << x.a() << ", " << x.b() << "]";
    throw DomainError(os.str());
  }
}

// Boundary sum for the RL derivative; sign = -1 for the right side.
double boundary_terms(const SampledFunction& x, const FractionalOrder& order, double anchor,
                      double distance, double sign) {
  double sum = 0.0;
  double sign_k = 1.0;
  for (int k = 0; k < order.n; ++k) {
    const double value = x.derivative(k, anchor);
    const double exponent = k - order.alpha;
    if (value != 0.0) {
      if (distance == 0.0 && exponent < 0.0) {
        throw DomainError("Riemann-Liouville derivative is unbounded at the anchor point");
      }
      sum += sign_k * value * std::pow(distance, exponent) * reciprocal_gamma(exponent + 1.0);
    }
    sign_k *= sign;
  }
  return sum;
}

}  // namespace

double rl_integral_left(const SampledFunction& x, double alpha, double a, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_left(x, a, t, "rl_integral_left");
  return quadrature::kernel_integral(order.alpha, t, a, [&](double tau) { return x(tau); }) /
         gamma(order.alpha);
}

double rl_integral_right(const SampledFunction& x, double alpha, double b, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_right(x, b, t, "rl_integral_right");
  return quadrature::kernel_integral(order.alpha, t, b, [&](double tau) { return x(tau); }) /
         gamma(order.alpha);
}

double caputo_derivative_left(const SampledFunction& x, double alpha, double a, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_left(x, a, t, "caputo_derivative_left");
  if (order.is_integer()) return x.derivative(order.n, t);
  const double mu = order.n - order.alpha;
  const auto dn = [&](double tau) { return x.derivative(order.n, tau); };
  return quadrature::kernel_integral(mu, t, a, dn) / gamma(mu);
}

double caputo_derivative_right(const SampledFunction& x, double alpha, double b, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_right(x, b, t, "caputo_derivative_right");
  const double sign = (order.n % 2 == 0) ? 1.0 : -1.0;
  if (order.is_integer()) return sign * x.derivative(order.n, t);
  const double mu = order.n - order.alpha;
  const auto dn = [&](double tau) { return x.derivative(order.n, tau); };
  return sign * quadrature::kernel_integral(mu, t, b, dn) / gamma(mu);
}

double rl_derivative_left(const SampledFunction& x, double alpha, double a, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_left(x, a, t, "rl_derivative_left");
  if (order.is_integer()) return x.derivative(order.n, t);
  return caputo_derivative_left(x, alpha, a, t) + boundary_terms(x, order, a, t - a, 1.0);
}

double rl_derivative_right(const SampledFunction& x, double alpha, double b, double t) {
  const auto order = FractionalOrder::of(alpha);
  check_right(x, b, t, "rl_derivative_right");
  if (order.is_integer()) {
    return ((order.n % 2 == 0) ? 1.0 : -1.0) * x.derivative(order.n, t);
  }
  return caputo_derivative_right(x, alpha, b, t) + boundary_terms(x, order, b, b - t, -1.0);
}

double apply_operator(OperatorKind kind, const SampledFunction& x, double alpha, double anchor,
                      double t) {
  switch (kind) {
    case OperatorKind::LeftRLIntegral: return rl_integral_left(x, alpha, anchor, t);
    case OperatorKind::RightRLIntegral: return rl_integral_right(x, alpha, anchor, t);
    case OperatorKind::LeftRLDerivative: return rl_derivative_left(x, alpha, anchor, t);
    case OperatorKind::RightRLDerivative: return rl_derivative_right(x, alpha, anchor, t);
    case OperatorKind::LeftCaputo: return caputo_derivative_left(x, alpha, anchor, t);
    case OperatorKind::RightCaputo: return caputo_derivative_right(x, alpha, anchor, t);
  }
  throw ParameterError("unknown operator kind");
}

double power_rule_integral(double alpha, double beta, double s) {
  return gamma(beta + 1.0) * reciprocal_gamma(beta + 1.0 + alpha) * std::pow(s, beta + alpha);
}

double power_rule_rl_derivative(double alpha, double beta, double s) {
  return gamma(beta + 1.0) * reciprocal_gamma(beta + 1.0 - alpha) * std::pow(s, beta - alpha);
}

double power_rule_caputo(double alpha, double beta, double s) {
  const auto order = FractionalOrder::of(alpha);
  if (beta == std::floor(beta) && beta < order.n) return 0.0;
  return power_rule_rl_derivative(alpha, beta, s);
}

namespace {

// n-th derivative of the left integral I^alpha x, from the Taylor split of x at a.
SampledFunction left_integral_as_function(const SampledFunction& x, double alpha, double a,
                                          double b, int derivative_count) {
  std::vector<SampledFunction::Fn> derivatives;
  for (int j = 1; j <= derivative_count; ++j) {
    derivatives.emplace_back([&x, alpha, a, j](double t) {
      const double s = t - a;
      double sum = 0.0;
      for (int k = 0; k < j; ++k) {
        const double value = x.derivative(k, a);
        if (value != 0.0) {
          sum += value * std::pow(s, k + alpha - j) * reciprocal_gamma(k + alpha - j + 1.0);
        }
      }
      const SampledFunction dj([&x, j](double tau) { return x.derivative(j, tau); }, x.a(), x.b());
      return sum + rl_integral_left(dj, alpha, a, t);
    });
  }
  return SampledFunction([&x, alpha, a](double t) { return rl_integral_left(x, alpha, a, t); }, a,
                         b, std::move(derivatives));
}

double fd_derivative(const std::function<double(double)>& g, int order, double t, double h) {
  if (order == 1) {
    return (-g(t + 2 * h) + 8 * g(t + h) - 8 * g(t - h) + g(t - 2 * h)) / (12 * h);
  }
  return (-g(t + 2 * h) + 16 * g(t + h) - 30 * g(t) + 16 * g(t - h) - g(t - 2 * h)) / (12 * h * h);
}

}  // namespace

PropertyReport check_calculus_properties(const SampledFunction& x, double alpha, double a,
                                         double b, double tol,
                                         const PropertyCheckOptions& options) {
  const auto order = FractionalOrder::of(alpha);
  PropertyReport report;
  report.tolerance = tol;
  const double length = b - a;

  std::vector<double> points = options.sample_points;
  if (points.empty()) {
    for (double frac : {0.2, 0.35, 0.5, 0.65, 0.8, 0.95}) points.push_back(a + frac * length);
  }

  // 1. Caputo = RL - boundary terms, with RL taken as d^n/dt^n of I^(n-alpha) x.
  if (order.is_integer()) {
    report.notes.emplace_back("property 1 trivial for integer order");
  } else if (order.n > 2) {
    report.notes.emplace_back("property 1 finite-difference route implemented for n <= 2 only");
  } else {
    const double h = options.fd_step * length;
    const auto lifted = [&](double t) { return rl_integral_left(x, order.n - alpha, a, t); };
    for (double t : points) {
      if (t - 2 * h < a || t + 2 * h > b) continue;
      const double rl = fd_derivative(lifted, order.n, t, h);
      double correction = 0.0;
      for (int k = 0; k < order.n; ++k) {
        correction += x.derivative(k, a) * std::pow(t - a, k - alpha) * reciprocal_gamma(k - alpha + 1);
      }
      const double residual = std::abs(caputo_derivative_left(x, alpha, a, t) - (rl - correction));
      report.residuals[0] = std::max(report.residuals[0], residual);
    }
  }

  // 2. I^alpha I^beta = I^(alpha + beta).
  {
    const double beta = options.beta;
    const SampledFunction inner([&](double t) { return rl_integral_left(x, beta, a, t); }, a, b);
    for (double t : points) {
      const double lhs = rl_integral_left(inner, alpha, a, t);
      const double rhs = rl_integral_left(x, alpha + beta, a, t);
      report.residuals[1] = std::max(report.residuals[1], std::abs(lhs - rhs));
    }
  }

  // 3. Caputo derivative of I^alpha x returns x.
  {
    const SampledFunction lifted = left_integral_as_function(x, alpha, a, b, order.n);
    for (double t : points) {
      const double lhs = caputo_derivative_left(lifted, alpha, a, t);
      report.residuals[2] = std::max(report.residuals[2], std::abs(lhs - x(t)));
    }
  }

  // 4. I^alpha of the Caputo derivative leaves x minus its Taylor polynomial at a.
  {
    const SampledFunction caputo([&](double t) { return caputo_derivative_left(x, alpha, a, t); },
                                 a, b);
    for (double t : points) {
      const double lhs = rl_integral_left(caputo, alpha, a, t);
      double taylor = 0.0;
      double factorial = 1.0;
      for (int k = 0; k < order.n; ++k) {
        if (k > 0) factorial *= k;
        taylor += x.derivative(k, a) * std::pow(t - a, k) / factorial;
      }
      report.residuals[3] = std::max(report.residuals[3], std::abs(lhs - (x(t) - taylor)));
    }
  }

  // 5. Integration by parts, n = 1:
  //    int y C_aD x = int x tD_b y + [tI_b^(1-alpha) y * x]_a^b, the bracket at b vanishing.
  if (order.n != 1 || order.is_integer()) {
    report.notes.emplace_back("integration by parts checked for 0 < alpha < 1 only");
  } else {
    const SampledFunction y = options.partner.value_or(
        SampledFunction([](double t) { return t; }, a, b, {[](double) { return 1.0; }}));
    const double lhs = quadrature::integrate(
        [&](double t) { return y(t) * caputo_derivative_left(x, alpha, a, t); }, a, b);
    // tD_b y = right Caputo + y(b) (b - t)^-alpha / Gamma(1 - alpha); the
    // singular term goes through the weighted kernel rule.
    const double rhs_integral =
        quadrature::integrate(
            [&](double t) { return x(t) * caputo_derivative_right(y, alpha, b, t); }, a, b) +
        y(b) * reciprocal_gamma(1.0 - alpha) *
            quadrature::kernel_integral(1.0 - alpha, b, a, [&](double t) { return x(t); });
    const double boundary = -rl_integral_right(y, 1.0 - alpha, b, a) * x(a);
    report.residuals[4] = std::abs(lhs - (rhs_integral + boundary));
  }

  report.max_residual = *std::max_element(report.residuals.begin(), report.residuals.end());
  report.passed = report.max_residual <= tol;
  return report;
}

}  // namespace fracopt
