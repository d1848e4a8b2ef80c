#include "fracopt/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracopt/errors.hpp"

namespace fracopt::quadrature {

namespace {

constexpr int kPoints = 12;

struct Rule12 {
  std::array<double, kPoints> x{};
  std::array<double, kPoints> w{};

  Rule12() {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < kPoints; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kPoints + 0.5));
      double derivative = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= kPoints; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        derivative = kPoints * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / derivative;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * derivative * derivative);
    }
  }
};

const Rule12& rule() {
  static const Rule12 instance;
  return instance;
}

double gauss_cell(const std::function<double(double)>& f, double lo, double hi) {
  const Rule12& r = rule();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < kPoints; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

// Cells narrower than this many ulps of the end point cannot place distinct
// Gauss nodes; grading stops there.
constexpr double kMinCellUlps = 4096.0;

bool resolvable(double endpoint, double width) {
  const double a = std::abs(endpoint);
  const double ulp = std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
  return width > kMinCellUlps * ulp;
}

// Grading toward an end stops once two consecutive cells contribute no more
// than this fraction of the running sum.
constexpr double kNegligible = 1e-17;

struct Grader {
  int quiet = 0;
  bool done(double cell, double sum) {
    quiet = std::abs(cell) <= kNegligible * std::abs(sum) ? quiet + 1 : 0;
    return quiet >= 2;
  }
};

}  // namespace

GaussLegendreRule gauss_legendre_12() {
  const Rule12& r = rule();
  return {std::span<const double>(r.x), std::span<const double>(r.w)};
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const GradingOptions& options) {
  if (hi == lo) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, options);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;

  // Toward lo, in the offset d from lo.
  double width = half;
  Grader g_lo;
  for (int level = 0; level < options.levels_near_lo && resolvable(lo, 0.5 * width); ++level) {
    const double inner = 0.5 * width;
    const double cell = gauss_cell([&](double d) { return f(lo + d); }, inner, width);
    sum += cell;
    width = inner;
    if (g_lo.done(cell, sum)) break;
  }
  sum += gauss_cell([&](double d) { return f(lo + d); }, 0.0, width);

  width = half;
  Grader g_hi;
  for (int level = 0; level < options.levels_near_hi && resolvable(hi, 0.5 * width); ++level) {
    const double inner = 0.5 * width;
    const double cell = gauss_cell([&](double e) { return f(hi - e); }, inner, width);
    sum += cell;
    width = inner;
    if (g_hi.done(cell, sum)) break;
  }
  sum += gauss_cell([&](double e) { return f(hi - e); }, 0.0, width);
  return sum;
}

double kernel_integral(double mu, double near, double far, const std::function<double(double)>& f,
                       int levels_near, int levels_far) {
  if (!(mu > 0.0)) throw ParameterError("kernel_integral: mu must be positive");
  const double length = std::abs(far - near);
  if (length == 0.0) return 0.0;
  const double dir = far > near ? 1.0 : -1.0;
  const double half = 0.5 * length;
  double sum = 0.0;

  // Kernel half, in the distance d from `near`.
  const auto near_part = [&](double d) { return std::pow(d, mu - 1.0) * f(near + dir * d); };
  double width = half;
  Grader g_near;
  for (int level = 0; level < levels_near && resolvable(near, 0.5 * width); ++level) {
    const double inner = 0.5 * width;
    const double cell = gauss_cell(near_part, inner, width);
    sum += cell;
    width = inner;
    if (g_near.done(cell, sum)) break;
  }
  const double delta = width;
  const double inv_mu = 1.0 / mu;
  const auto substituted = [&](double s) { return f(near + dir * delta * std::pow(s, inv_mu)); };
  sum += std::pow(delta, mu) * inv_mu * gauss_cell(substituted, 0.0, 1.0);

  // Far half, in the distance e from `far`; the kernel distance is length - e.
  const auto far_part = [&](double e) {
    return std::pow(length - e, mu - 1.0) * f(far - dir * e);
  };
  width = half;
  Grader g_far;
  for (int level = 0; level < levels_far && resolvable(far, 0.5 * width); ++level) {
    const double inner = 0.5 * width;
    const double cell = gauss_cell(far_part, inner, width);
    sum += cell;
    width = inner;
    if (g_far.done(cell, sum)) break;
  }
  sum += gauss_cell(far_part, 0.0, width);
  return sum;
}

}  // namespace fracopt::quadrature
