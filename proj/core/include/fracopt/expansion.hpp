#pragma once

#include <span>
#include <vector>

namespace fracopt {

enum class Side { Left, Right };

/// Moment V_p(t) = (p - n + 1) * int_a^t (tau - a)^(p - n) x(tau) dtau, V_p(a) = 0.
/// The n = 2 layout uses the negated moment (1 - p) * int (tau - a)^(p - 2) x.
struct MomentSpec {
  int p;
  int n;

  int weight_exponent() const { return p - n; }
  double scale() const { return static_cast<double>(p - n + 1); }
  /// dV_p/dt at distance s = t - a from the anchor.
  double rate(double s, double x) const;
};

/// Coefficients of the legacy two-term layout
///   D^alpha x ~ A s^-alpha x + B s^(1-alpha) x' - sum_{p=2}^N C_p s^(1-p-alpha) V_p,
///   V_p' = (1 - p) s^(p-2) x.
struct LegacyCoefficients {
  double A;
  double B;
  /// C[p - 2] for p = 2..N.
  std::vector<double> C;
  double c(int p) const { return C[static_cast<std::size_t>(p - 2)]; }
};

/// Truncated integer-order expansion of the Riemann-Liouville derivative:
///
///   D^alpha x(t) ~ sum_{i<n} A_i s^(i-alpha) x^(i)(t) + sum_{p=n}^N B_p s^(n-1-p-alpha) V_p(t)
///
/// with s the distance from the anchor. Every series inside A_i is truncated
/// at the same N as the moment sum, which makes the expansion exact on the
/// monomials 1, s, ..., s^(n-1). Right-sided schemes are the reflection
/// t -> a + b - t of the left scheme.
class ExpansionScheme {
 public:
  /// Throws ParameterError unless alpha > 0 is non-integer, n >= 1 and N >= n.
  static ExpansionScheme build(double alpha, int n, int N, Side side = Side::Left);

  double alpha() const { return alpha_; }
  int order() const { return n_; }
  int truncation() const { return N_; }
  Side side() const { return side_; }

  /// A_i for i = 0..n-1.
  std::span<const double> derivative_coefficients() const { return A_; }
  /// B_p for p = n..N.
  std::span<const double> moment_coefficients() const { return B_; }
  double moment_coefficient(int p) const;
  MomentSpec moment(int p) const { return {p, n_}; }

  /// The n = 2 layout as a view over the canonical coefficients
  /// (C_p = B_p, with the moment sign flipped). Throws unless n == 2 and alpha < 1.
  LegacyCoefficients legacy() const;

  /// Expansion value at distance s > 0 from the anchor.
  ///
  /// `derivatives` holds x^(i) at the evaluation point in the scheme's own
  /// direction (for right-sided schemes, derivatives of the reflected
  /// function) and `moments` holds V_p, p = n..N, in canonical sign.
  double evaluate(double s, std::span<const double> derivatives,
                  std::span<const double> moments) const;

 private:
  ExpansionScheme() = default;

  double alpha_ = 0.0;
  int n_ = 0;
  int N_ = 0;
  Side side_ = Side::Left;
  std::vector<double> A_;
  std::vector<double> B_;
};

/// Upper bound on the truncation error at distance t_minus_a from the anchor,
/// given L_n = max |x^(n)| on the interval:
///   L_n e^((n-1-alpha)^2 + n-1-alpha) / (Gamma(n-alpha) (n-1-alpha) N^(n-1-alpha)) (t-a)^(n-alpha).
/// Throws DomainError when n - 1 - alpha <= 0 (the bound does not apply).
double truncation_error_bound(const ExpansionScheme& scheme, double L_n, double t_minus_a);

/// Coefficients binom(alpha, k) / Gamma(k + 1 - alpha), k = 0..N, of the
/// classical series D^alpha x = sum_k c_k (t - a)^(k - alpha) x^(k)(t).
std::vector<double> classical_series_coefficients(double alpha, int N);

}  // namespace fracopt
