#include "fracopt/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracopt/errors.hpp"

namespace fracopt {

namespace {

// Lanczos approximation, g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

constexpr double kMaxArgument = 171.62437695630272;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Gamma(x) for x >= 0.5.
double lanczos_gamma(double x) {
  const double z = x - 1.0;
  double series = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
    series += kLanczosCoef[k] / (z + static_cast<double>(k));
  }
  const double t = z + kLanczosG + 0.5;
  // Split the power so that t^(z+0.5) never overflows before exp(-t) shrinks it.
  const double half_power = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * std::exp(-t) * half_power * series;
}

}  // namespace

double sin_pi(double x) {
  if (x == std::floor(x)) return 0.0;
  // Reduce to r in [-1, 1) with x = 2k + r, then fold into [-0.5, 0.5].
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

double gamma(double x) {
  if (std::isnan(x)) throw DomainError("gamma: NaN argument");
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma: pole at x = " << x;
    throw DomainError(os.str());
  }
  if (x > kMaxArgument) {
    std::ostringstream os;
    os << "gamma: overflow at x = " << x;
    throw OverflowError(os.str());
  }
  if (x == std::floor(x) && x <= 30.0) {
    double result = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) result *= k;
    return result;
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double denominator = sin_pi(x) * lanczos_gamma(1.0 - x);
    return std::numbers::pi / denominator;
  }
  return lanczos_gamma(x);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > kMaxArgument) return 0.0;
  return 1.0 / gamma(x);
}

double frac_binomial(double alpha, int k) {
  if (k < 0) throw ParameterError("frac_binomial: k must be non-negative");
  double value = 1.0;
  for (int j = 0; j < k; ++j) {
    value *= (alpha - j) / (j + 1);
  }
  return value;
}

}  // namespace fracopt
