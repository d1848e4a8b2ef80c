#include "fracopt/approximator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fracopt/csv.hpp"
#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kFirstIntervalSubsteps = 256;
constexpr int kSubsteps = 8;

void check_anchor(const SampledFunction& x, const Grid& grid, Side side) {
  const double span = x.b() - x.a();
  const double tol = 1e-12 * span;
  const bool ok = side == Side::Left
                      ? std::abs(grid.a - x.a()) <= tol && grid.b <= x.b() + tol
                      : std::abs(grid.b - x.b()) <= tol && grid.a >= x.a() - tol;
  if (!ok) {
    std::ostringstream os;
    os << "grid [" << grid.a << ", " << grid.b << "] does not start at the scheme's anchor "
       << (side == Side::Left ? x.a() : x.b());
    throw ParameterError(os.str());
  }
}

// The anchor node is excluded from the error maximum.
ApproximationRun finish(const Grid& grid, Vector values, const Oracle& exact,
                        Side side = Side::Left) {
  ApproximationRun run{grid, std::move(values), std::nullopt, kNaN};
  if (exact) {
    Vector e(grid.m);
    for (int i = 0; i < grid.m; ++i) e[i] = exact(grid.node(i));
    run.exact = std::move(e);
    const Vector err = run.abs_error();
    run.max_abs_error =
        side == Side::Left ? err.tail(grid.m - 1).maxCoeff() : err.head(grid.m - 1).maxCoeff();
  }
  return run;
}

ApproximationRun left_rl(const SampledFunction& x, const ExpansionScheme& scheme, const Grid& grid,
                         const Oracle& exact) {
  const int n = scheme.order();
  const int N = scheme.truncation();
  const int count = N - n + 1;
  const double a = grid.a;

  const Field rates = [&](double t, const Vector&) {
    Vector d(count);
    const double xt = x(t);
    for (int p = n; p <= N; ++p) d[p - n] = scheme.moment(p).rate(t - a, xt);
    return d;
  };

  Vector values(grid.m);
  Vector moments = Vector::Zero(count);
  std::vector<double> derivs(static_cast<std::size_t>(n));
  values[0] = kNaN;
  if (exact) {
    const double e = exact(a);
    if (std::isfinite(e)) values[0] = e;
  }
  for (int i = 1; i < grid.m; ++i) {
    const int sub = i == 1 ? kFirstIntervalSubsteps : kSubsteps;
    const double t_prev = grid.node(i - 1);
    const double h = (grid.node(i) - t_prev) / sub;
    for (int j = 0; j < sub; ++j) moments = rk4_step(rates, t_prev + j * h, moments, h);

    const double t = grid.node(i);
    for (int k = 0; k < n; ++k) derivs[static_cast<std::size_t>(k)] = k == 0 ? x(t) : x.derivative(k, t);
    values[i] = scheme.evaluate(t - a, derivs, {moments.data(), static_cast<std::size_t>(count)});
  }
  return finish(grid, std::move(values), exact);
}

// Runs `left` on the reflection of x and the grid, then maps back.
template <class LeftFn>
ApproximationRun via_reflection(const SampledFunction& x, const Grid& grid, const Oracle& exact,
                                LeftFn left) {
  const SampledFunction y = x.reflected();
  const double lo = x.a();
  const double hi = x.a() + x.b() - grid.a;
  const Grid mirrored{lo, hi, grid.m};
  Oracle mirrored_exact;
  if (exact) {
    const double shift = x.a() + x.b();
    mirrored_exact = [exact, shift](double t) { return exact(shift - t); };
  }
  const ApproximationRun left_run = left(y, mirrored, mirrored_exact);
  Vector values = left_run.values.reverse();
  return finish(grid, std::move(values), exact, Side::Right);
}

}  // namespace

Grid Grid::make(double a, double b, int m) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("grid needs finite a < b");
  }
  if (m < 2) throw ParameterError("grid needs m >= 2 nodes");
  return Grid{a, b, m};
}

Vector Grid::nodes() const {
  Vector t(m);
  for (int i = 0; i < m; ++i) t[i] = node(i);
  return t;
}

Vector ApproximationRun::abs_error() const {
  Vector err = Vector::Constant(grid.m, kNaN);
  if (exact) err = (*exact - values).cwiseAbs();
  return err;
}

std::string ApproximationRun::csv() const {
  csv::Table table({"t", "exact", "approx", "abs_error"});
  const Vector err = abs_error();
  for (int i = 0; i < grid.m; ++i) {
    table.add_row({grid.node(i), exact ? (*exact)[i] : kNaN, values[i], err[i]});
  }
  return table.str();
}

ApproximationRun approximate_rl_derivative(const SampledFunction& x, const ExpansionScheme& scheme,
                                           const Grid& grid, const Oracle& exact) {
  Grid::make(grid.a, grid.b, grid.m);
  check_anchor(x, grid, scheme.side());
  if (scheme.side() == Side::Left) return left_rl(x, scheme, grid, exact);
  return via_reflection(x, grid, exact, [&](const SampledFunction& y, const Grid& g, const Oracle& e) {
    return left_rl(y, scheme, g, e);
  });
}

ApproximationRun approximate_caputo_derivative(const SampledFunction& x,
                                               const ExpansionScheme& scheme, const Grid& grid,
                                               const Oracle& exact) {
  Grid::make(grid.a, grid.b, grid.m);
  check_anchor(x, grid, scheme.side());
  const double alpha = scheme.alpha();
  const int n_op = FractionalOrder::of(alpha).n;
  const auto left_caputo = [&](const SampledFunction& y, const Grid& g, const Oracle& e) {
    ApproximationRun run = left_rl(y, scheme, g, {});
    std::vector<double> at_anchor(static_cast<std::size_t>(n_op));
    for (int k = 0; k < n_op; ++k) {
      at_anchor[static_cast<std::size_t>(k)] = k == 0 ? y(g.a) : y.derivative(k, g.a);
    }
    for (int i = 1; i < g.m; ++i) {
      const double s = g.node(i) - g.a;
      for (int k = 0; k < n_op; ++k) {
        run.values[i] -= at_anchor[static_cast<std::size_t>(k)] * std::pow(s, k - alpha) *
                         reciprocal_gamma(k - alpha + 1.0);
      }
    }
    if (e) {
      const double v = e(g.a);
      if (std::isfinite(v)) run.values[0] = v;
    }
    return finish(g, std::move(run.values), e);
  };
  if (scheme.side() == Side::Left) return left_caputo(x, grid, exact);
  return via_reflection(x, grid, exact, left_caputo);
}

ApproximationRun approximate_classical_series(const SampledFunction& x, double alpha, int N,
                                              const Grid& grid, const Oracle& exact) {
  Grid::make(grid.a, grid.b, grid.m);
  check_anchor(x, grid, Side::Left);
  const std::vector<double> c = classical_series_coefficients(alpha, N);
  for (int k = 1; k <= N; ++k) {
    if (!x.has_derivative(k) && !x.finite_difference_fallback()) {
      throw CapabilityError("classical series needs x^(" + std::to_string(k) + ")");
    }
  }
  Vector values(grid.m);
  values[0] = kNaN;
  if (exact) {
    const double e = exact(grid.a);
    if (std::isfinite(e)) values[0] = e;
  }
  for (int i = 1; i < grid.m; ++i) {
    const double t = grid.node(i);
    const double s = t - grid.a;
    double sum = 0.0;
    for (int k = 0; k <= N; ++k) {
      const double ck = c[static_cast<std::size_t>(k)];
      if (ck == 0.0) continue;
      sum += ck * std::pow(s, k - alpha) * (k == 0 ? x(t) : x.derivative(k, t));
    }
    values[i] = sum;
  }
  return finish(grid, std::move(values), exact);
}

}  // namespace fracopt
