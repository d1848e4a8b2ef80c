#pragma once

#include <functional>
#include <span>

namespace fracopt::quadrature {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// Fixed 12-point rule used by every composite integrator below.
GaussLegendreRule gauss_legendre_12();

/// Composite Gauss-Legendre with geometric grading (ratio 1/2) toward both
/// end points. Integrable algebraic end-point singularities are resolved
/// down to a width of 2^-levels of the interval.
struct GradingOptions {
  int levels_near_lo = 100;
  int levels_near_hi = 100;
};

/// Integral of f over [lo, hi]; returns 0 for an empty interval.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const GradingOptions& options = {});

/// Integral of |tau - near|^(mu-1) f(tau) for tau between `near` and `far`,
/// mu > 0, with the orientation of the interval ignored (always >= 0 weight).
///
/// The kernel half is graded toward `near` and its innermost cell is done
/// exactly in the weight through the substitution s = d^mu. The other half is
/// graded toward `far` using absolute offsets from `far`, so singularities of f
/// at `far` are resolved as finely as doubles near `far` allow.
double kernel_integral(double mu, double near, double far, const std::function<double(double)>& f,
                       int levels_near = 20, int levels_far = 100);

}  // namespace fracopt::quadrature
