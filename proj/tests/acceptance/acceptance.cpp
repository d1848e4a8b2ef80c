// Acceptance checks 1-8. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fracopt/approximator.hpp"
#include "fracopt/catalog.hpp"
#include "fracopt/expansion.hpp"
#include "fracopt/operators.hpp"
#include "fracopt/pipelines.hpp"

using namespace fracopt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int report(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = seconds <= limit_seconds;
  const bool pass = out.pass && in_time;
  std::printf("criterion %d %s: %s (%.2f s of %.0f s) %s\n", id, title, pass ? "PASS" : "FAIL",
              seconds, limit_seconds, out.detail.c_str());
  std::fflush(stdout);
  return pass ? 0 : 1;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

const std::vector<double> kAlphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

SampledFunction monomial(double beta) {
  return SampledFunction([beta](double t) { return std::pow(t, beta); }, 0.0, 1.0,
                         {[beta](double t) { return beta * std::pow(t, beta - 1); }});
}

// x = t^4 and x = e^(2t) on [0, 1] with RL oracles and L_2(t) = max |x''| on [0, t].
struct TestCase {
  const char* name;
  SampledFunction x;
  std::function<double(double)> rl;
  std::function<double(double)> L2;
};

std::vector<TestCase> figure_cases(double alpha) {
  std::vector<SampledFunction::Fn> t4d{[](double t) { return 4 * std::pow(t, 3); },
                                       [](double t) { return 12 * t * t; },
                                       [](double t) { return 24 * t; },
                                       [](double) { return 24.0; },
                                       [](double) { return 0.0; }};
  std::vector<SampledFunction::Fn> ed;
  for (int k = 1; k <= 8; ++k) ed.push_back([k](double t) { return std::pow(2.0, k) * std::exp(2 * t); });
  return {
      {"t^4", SampledFunction([](double t) { return std::pow(t, 4); }, 0.0, 1.0, t4d),
       [alpha](double t) { return 24.0 / std::tgamma(5 - alpha) * std::pow(t, 4 - alpha); },
       [](double t) { return 12 * t * t; }},
      {"e^2t", SampledFunction([](double t) { return std::exp(2 * t); }, 0.0, 1.0, ed),
       [alpha](double t) {
         double sum = 0.0;
         for (int k = 0; k < 60; ++k) sum += std::pow(2 * t, k) / std::tgamma(k + 1 - alpha);
         return sum * std::pow(t, -alpha);
       },
       [](double t) { return 4 * std::exp(2 * t); }},
  };
}

Outcome coefficient_identities() {
  double worst = 0.0;
  for (double alpha : kAlphas) {
    for (int N = 2; N <= 12; ++N) {
      const auto c = ExpansionScheme::build(alpha, 2, N).legacy();
      double constant = c.A;
      double linear = c.A + c.B;
      for (int p = 2; p <= N; ++p) {
        constant += c.c(p);
        linear += c.c(p) * (p - 1.0) / p;
      }
      worst = std::max(worst, std::abs(constant - 1.0 / std::tgamma(1 - alpha)));
      worst = std::max(worst, std::abs(linear - 1.0 / std::tgamma(2 - alpha)));
    }
  }
  return {worst <= 1e-12, fmt("max identity defect %.3g", worst)};
}

Outcome oracle_agreement() {
  double worst = 0.0;
  for (double alpha : kAlphas) {
    for (double beta : {1.0, 2.0, 3.0, 4.0}) {
      const auto x = monomial(beta);
      const double g = std::tgamma(beta + 1);
      for (double t : {0.25, 0.5, 1.0}) {
        const double integral = g / std::tgamma(beta + 1 + alpha) * std::pow(t, beta + alpha);
        const double derivative = g / std::tgamma(beta + 1 - alpha) * std::pow(t, beta - alpha);
        worst = std::max(worst, std::abs(rl_integral_left(x, alpha, 0.0, t) - integral));
        worst = std::max(worst, std::abs(rl_derivative_left(x, alpha, 0.0, t) - derivative));
        // x(0) = 0, so the Caputo and RL closed forms coincide.
        worst = std::max(worst, std::abs(caputo_derivative_left(x, alpha, 0.0, t) - derivative));
      }
    }
  }
  return {worst <= 1e-6, fmt("max deviation from power rules %.3g", worst)};
}

Outcome monotone_errors() {
  const auto grid = Grid::make(0.0, 1.0, 101);
  Outcome out;
  for (const auto& c : figure_cases(0.5)) {
    std::vector<double> in_N;
    for (int N : {2, 4, 6}) {
      in_N.push_back(
          approximate_rl_derivative(c.x, ExpansionScheme::build(0.5, 2, N), grid, c.rl).max_abs_error);
    }
    std::vector<double> in_n;
    for (int n : {1, 2, 3}) {
      in_n.push_back(
          approximate_rl_derivative(c.x, ExpansionScheme::build(0.5, n, 6), grid, c.rl).max_abs_error);
    }
    const bool ok = in_N[0] > in_N[1] && in_N[1] > in_N[2] && in_n[0] > in_n[1] && in_n[1] > in_n[2];
    out.pass = out.pass && ok;
    out.detail += std::string(c.name) + fmt(" N:%.3g,", in_N[0]) + fmt("%.3g,", in_N[1]) +
                  fmt("%.3g", in_N[2]) + fmt(" n:%.3g,", in_n[0]) + fmt("%.3g,", in_n[1]) +
                  fmt("%.3g; ", in_n[2]);
  }
  return out;
}

Outcome error_bound_certificate() {
  const auto grid = Grid::make(0.0, 1.0, 101);
  const double slack = 1e-8;
  double worst_ratio = 0.0;
  bool ok = true;
  for (const auto& c : figure_cases(0.5)) {
    for (int N : {4, 6, 8}) {
      const auto scheme = ExpansionScheme::build(0.5, 2, N);
      const auto err = approximate_rl_derivative(c.x, scheme, grid, c.rl).abs_error();
      for (int i = 1; i < grid.m; ++i) {
        const double t = grid.node(i);
        const double bound = truncation_error_bound(scheme, c.L2(t), t);
        ok = ok && err[i] <= bound + slack;
        worst_ratio = std::max(worst_ratio, err[i] / (bound + slack));
      }
    }
  }
  return {ok, fmt("max error / bound %.3g", worst_ratio)};
}

Outcome example1_end_to_end() {
  const auto e = example1(0.5);
  Outcome out;
  for (auto pipeline : {Pipeline::FractionalConditions, Pipeline::ReduceThenClassical}) {
    double E[2] = {0.0, 0.0};
    for (int N : {2, 3}) {
      PipelineOptions o;
      o.approximation.N = N;
      o.solver.nodes = 1001;
      const auto r = run_pipeline(e.problem, pipeline, o);
      const bool converged = r.solution.converged && r.solution.residual_norm <= 1e-8;
      E[N - 2] = compare_exact(r, e.exact_x, e.exact_u).state;
      out.pass = out.pass && converged && r.cost <= 1e-3;
      if (N == 3) out.detail += to_string(pipeline) + fmt(" J=%.2g", r.cost);
    }
    out.pass = out.pass && E[1] < E[0] && E[1] <= 0.05;
    out.detail += fmt(" E(2)=%.4g E(3)=%.4g; ", E[0], E[1]);
  }
  return out;
}

Outcome example2_cross_validation() {
  const auto e = example2(0.5);
  PipelineOptions o;
  o.approximation.N = 2;
  const auto frac = run_pipeline(e.problem, Pipeline::FractionalConditions, o);
  const auto red = run_pipeline(e.problem, Pipeline::ReduceThenClassical, o);
  if (!frac.solution.converged || !red.solution.converged) {
    return {false, "a pipeline did not converge"};
  }
  // Discrepancy on the common range, interpolating the reduced run linearly.
  const double lo = std::max(frac.t[0], red.t[0]);
  const double hi = std::min(frac.t[frac.t.size() - 1], red.t[red.t.size() - 1]);
  double discrepancy = 0.0;
  int j = 0;
  for (int i = 0; i < frac.t.size(); ++i) {
    const double t = frac.t[i];
    if (t < lo || t > hi) continue;
    while (j + 2 < red.t.size() && red.t[j + 1] < t) ++j;
    const double w = (t - red.t[j]) / (red.t[j + 1] - red.t[j]);
    const double xr = (1 - w) * red.x[j] + w * red.x[j + 1];
    discrepancy = std::max(discrepancy, std::abs(frac.x[i] - xr));
  }
  const double dT = std::abs(frac.T - red.T);
  return {discrepancy <= 0.1 && dT <= 0.05,
          fmt("T=%.6g vs %.6g, max x discrepancy %.3g", frac.T, red.T, discrepancy)};
}

Outcome classical_limit() {
  const auto e = lq(1.0, 1.0);
  double worst = 0.0;
  bool converged = true;
  for (auto pipeline : {Pipeline::FractionalConditions, Pipeline::ReduceThenClassical}) {
    const auto r = run_pipeline(e.problem, pipeline, {});
    converged = converged && r.solution.converged;
    const auto err = compare_exact(r, e.exact_x, e.exact_u);
    worst = std::max({worst, err.state, err.control});
  }
  return {converged && worst <= 1e-6, fmt("max deviation from the Riccati solution %.3g", worst)};
}

Outcome property_suite() {
  struct Smooth {
    const char* name;
    SampledFunction x;
    double alpha;
  };
  const auto expo = SampledFunction([](double t) { return std::exp(2 * t); }, 0.0, 1.0,
                                    {[](double t) { return 2 * std::exp(2 * t); }});
  const std::vector<Smooth> set{
      {"t^2", SampledFunction([](double t) { return t * t; }, 0.0, 1.0,
                              {[](double t) { return 2 * t; }}),
       0.5},
      {"1+t^3", SampledFunction([](double t) { return 1 + t * t * t; }, 0.0, 1.0,
                                {[](double t) { return 3 * t * t; }}),
       0.5},
      {"sin", SampledFunction([](double t) { return std::sin(t); }, 0.0, 1.0,
                              {[](double t) { return std::cos(t); }}),
       0.5},
      {"e^2t", expo, 0.25},
      {"e^2t", expo, 0.5},
      {"e^2t", expo, 0.75},
  };
  double worst = 0.0;
  for (const auto& s : set) {
    const auto r = check_calculus_properties(s.x, s.alpha, 0.0, 1.0, 1e-5);
    worst = std::max(worst, r.max_residual);
  }
  return {worst <= 1e-5, fmt("max residual %.3g over %g cases", worst, static_cast<double>(set.size()))};
}

}  // namespace

int main() {
  int failures = 0;
  failures += report(1, "coefficient identities", 1, coefficient_identities);
  failures += report(2, "oracle agreement", 5, oracle_agreement);
  failures += report(3, "monotone approximation error", 10, monotone_errors);
  failures += report(4, "error-bound certificate", 10, error_bound_certificate);
  failures += report(5, "example 1 end to end", 60, example1_end_to_end);
  failures += report(6, "example 2 cross-validation", 60, example2_cross_validation);
  failures += report(7, "classical LQ limit", 5, classical_limit);
  failures += report(8, "calculus property suite", 10, property_suite);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
