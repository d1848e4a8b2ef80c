#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fracopt/expansion.hpp"
#include "fracopt/operators.hpp"
#include "fracopt/tpbvp.hpp"

namespace fracopt {

/// Uniform grid t_i = a + i (b - a) / (m - 1), i = 0..m-1.
struct Grid {
  double a;
  double b;
  int m;

  /// Throws ParameterError unless a < b and m >= 2.
  static Grid make(double a, double b, int m);
  double node(int i) const { return i == m - 1 ? b : a + i * (b - a) / (m - 1); }
  double step() const { return (b - a) / (m - 1); }
  Vector nodes() const;
};

using Oracle = std::function<double(double)>;

struct ApproximationRun {
  Grid grid;
  Vector values;
  /// Oracle values when an oracle was supplied.
  std::optional<Vector> exact;
  /// Max |exact - values| over nodes away from the anchor; NaN without an oracle.
  double max_abs_error = 0.0;

  /// |exact - values| per node (NaN where either is unset).
  Vector abs_error() const;
  /// CSV with columns t, exact, approx, abs_error.
  std::string csv() const;
};

/// Expansion approximation of the RL derivative on the grid. The grid must
/// start at x.a() for left schemes and end at x.b() for right schemes (the
/// anchors). At the anchor node the value is the oracle's (when finite),
/// otherwise NaN. Moments are integrated with RK4 sub-stepped within each
/// grid interval (more finely on the first one, where the weights are least
/// smooth relative to the state).
ApproximationRun approximate_rl_derivative(const SampledFunction& x, const ExpansionScheme& scheme,
                                           const Grid& grid, const Oracle& exact = {});

/// RL approximation minus the boundary terms x^(k)(anchor) s^(k-alpha) / Gamma(k-alpha+1).
ApproximationRun approximate_caputo_derivative(const SampledFunction& x,
                                               const ExpansionScheme& scheme, const Grid& grid,
                                               const Oracle& exact = {});

/// Left classical series sum_{k=0}^N binom(alpha,k) s^(k-alpha) x^(k)(t) / Gamma(k+1-alpha).
/// Throws CapabilityError when x^(k) is unavailable and the fallback is off.
ApproximationRun approximate_classical_series(const SampledFunction& x, double alpha, int N,
                                              const Grid& grid, const Oracle& exact = {});

}  // namespace fracopt
