#include "fracopt/expansion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

double MomentSpec::rate(double s, double x) const {
  const int k = weight_exponent();
  return scale() * (k == 0 ? 1.0 : std::pow(s, k)) * x;
}

ExpansionScheme ExpansionScheme::build(double alpha, int n, int N, Side side) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ParameterError("expansion: alpha must be finite and positive");
  }
  if (alpha == std::floor(alpha)) {
    throw ParameterError("expansion: alpha must not be an integer");
  }
  if (n < 1) throw ParameterError("expansion: n must be at least 1");
  if (N < n) {
    std::ostringstream os;
    os << "expansion: truncation N = " << N << " must satisfy N >= n = " << n;
    throw ParameterError(os.str());
  }

  ExpansionScheme scheme;
  scheme.alpha_ = alpha;
  scheme.n_ = n;
  scheme.N_ = N;
  scheme.side_ = side;

  // 1 / (Gamma(-alpha) Gamma(1 + alpha)) = -sin(pi alpha) / pi.
  const double reflection = -sin_pi(alpha) / std::numbers::pi;

  // B_p = Gamma(q + alpha) / q! * reflection with q = p - n + 1, built by the
  // ratio recurrence Gamma(q + alpha) / q! = Gamma(q - 1 + alpha) / (q - 1)! * (q - 1 + alpha) / q.
  scheme.B_.resize(static_cast<std::size_t>(N - n + 1));
  double ratio = gamma(1.0 + alpha);  // q = 1
  for (int p = n; p <= N; ++p) {
    const int q = p - n + 1;
    if (q > 1) ratio *= (q - 1 + alpha) / q;
    scheme.B_[static_cast<std::size_t>(p - n)] = ratio * reflection;
  }

  scheme.A_.resize(static_cast<std::size_t>(n));
  double b_sum = 0.0;
  for (double b : scheme.B_) b_sum += b;
  scheme.A_[0] = reciprocal_gamma(1.0 - alpha) - b_sum;

  for (int i = 1; i < n; ++i) {
    // sum_{p=n-i}^{N} Gamma(q + alpha) / (q + i)!, q = p - n + 1 running from 1 - i.
    const int q_first = 1 - i;
    double term = gamma(q_first + alpha);  // (q_first + i)! = 1
    double series = term;
    for (int q = q_first + 1; q <= N - n + 1; ++q) {
      term *= (q - 1 + alpha) / (q + i);
      series += term;
    }
    scheme.A_[static_cast<std::size_t>(i)] =
        reciprocal_gamma(i + 1.0 - alpha) * (1.0 + series * reciprocal_gamma(alpha - i));
  }
  return scheme;
}

double ExpansionScheme::moment_coefficient(int p) const {
  if (p < n_ || p > N_) throw ParameterError("expansion: moment index out of range");
  return B_[static_cast<std::size_t>(p - n_)];
}

LegacyCoefficients ExpansionScheme::legacy() const {
  if (n_ != 2 || alpha_ >= 1.0) {
    throw ParameterError("expansion: the legacy layout requires n = 2 and 0 < alpha < 1");
  }
  return {A_[0], A_[1], B_};
}

double ExpansionScheme::evaluate(double s, std::span<const double> derivatives,
                                 std::span<const double> moments) const {
  if (derivatives.size() < static_cast<std::size_t>(n_)) {
    throw ParameterError("expansion: need x^(i) for i = 0..n-1");
  }
  if (moments.size() != B_.size()) throw ParameterError("expansion: need V_p for p = n..N");
  double value = 0.0;
  for (int i = 0; i < n_; ++i) {
    value += A_[static_cast<std::size_t>(i)] * std::pow(s, i - alpha_) *
             derivatives[static_cast<std::size_t>(i)];
  }
  for (int p = n_; p <= N_; ++p) {
    const auto j = static_cast<std::size_t>(p - n_);
    value += B_[j] * std::pow(s, n_ - 1 - p - alpha_) * moments[j];
  }
  return value;
}

double truncation_error_bound(const ExpansionScheme& scheme, double L_n, double t_minus_a) {
  const double gap = scheme.order() - 1 - scheme.alpha();
  if (gap <= 0.0) {
    std::ostringstream os;
    os << "truncation bound needs n - 1 - alpha > 0 (n = " << scheme.order()
       << ", alpha = " << scheme.alpha() << ")";
    throw DomainError(os.str());
  }
  if (L_n < 0.0 || t_minus_a < 0.0) {
    throw ParameterError("truncation bound needs L_n >= 0 and t - a >= 0");
  }
  const int n = scheme.order();
  const double N = scheme.truncation();
  return L_n * std::exp(gap * gap + gap) /
         (gamma(n - scheme.alpha()) * gap * std::pow(N, gap)) *
         std::pow(t_minus_a, n - scheme.alpha());
}

std::vector<double> classical_series_coefficients(double alpha, int N) {
  if (N < 0) throw ParameterError("classical series: N must be non-negative");
  std::vector<double> c(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k) {
    c[static_cast<std::size_t>(k)] = frac_binomial(alpha, k) * reciprocal_gamma(k + 1.0 - alpha);
  }
  return c;
}

}  // namespace fracopt
