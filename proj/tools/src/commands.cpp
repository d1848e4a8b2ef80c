#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fracopt/approximator.hpp"
#include "fracopt/catalog.hpp"
#include "fracopt/config.hpp"
#include "fracopt/csv.hpp"
#include "fracopt/errors.hpp"
#include "fracopt/expansion.hpp"
#include "fracopt/pipelines.hpp"
#include "functions.hpp"
#include "output.hpp"

namespace fracopt::cli {

namespace {

using csv::format_number;
using ExactFn = std::function<double(double)>;

std::string short_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", v);
  return buffer;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<Pipeline> pipelines_from(const std::string& text) {
  if (text == "both") return {Pipeline::FractionalConditions, Pipeline::ReduceThenClassical};
  if (auto p = parse_pipeline(text)) return {*p};
  throw ValidationError("unknown pipeline '" + text +
                        "' (expected fractional-conditions, reduce-then-classical or both)");
}

std::string short_name(Pipeline p) {
  return p == Pipeline::FractionalConditions ? "fractional" : "reduced";
}

// Linear interpolation of (t, y) at s; s must lie inside the sample range.
double interpolate(const Vector& t, const Vector& y, double s) {
  const auto* begin = t.data();
  const auto* end = begin + t.size();
  const auto it = std::upper_bound(begin, end, s);
  const Eigen::Index i = std::clamp<Eigen::Index>(it - begin - 1, 0, t.size() - 2);
  const double w = (s - t[i]) / (t[i + 1] - t[i]);
  return (1.0 - w) * y[i] + w * y[i + 1];
}

double max_discrepancy(const PipelineResult& a, const PipelineResult& b) {
  const double lo = std::max(a.t[0], b.t[0]);
  const double hi = std::min(a.t[a.t.size() - 1], b.t[b.t.size() - 1]);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.t.size(); ++i) {
    if (a.t[i] < lo || a.t[i] > hi) continue;
    worst = std::max(worst, std::abs(a.x[i] - interpolate(b.t, b.x, a.t[i])));
  }
  return worst;
}

struct SuiteSpec {
  FocpProblem problem;
  ExactFn exact_x;
  ExactFn exact_u;
  std::vector<Pipeline> pipelines;
  std::vector<int> N;
  int grid;
  double epsilon;
  double tolerance;
};

// Solves every (pipeline, N) pair, writes trajectories and summary.csv.
// Returns the exit code.
int run_suite(const SuiteSpec& spec, RunOutput& out) {
  csv::Table summary({"pipeline", "N", "converged", "residual_norm", "iterations", "T", "E",
                      "control_error", "J", "stationarity"});
  std::vector<PipelineResult> results;
  bool all_converged = true;
  for (int N : spec.N) {
    for (Pipeline pipeline : spec.pipelines) {
      PipelineOptions options;
      options.approximation.N = N;
      options.approximation.epsilon = spec.epsilon;
      options.solver.nodes = spec.grid;
      options.solver.tolerance = spec.tolerance;
      PipelineResult r = run_pipeline(spec.problem, pipeline, options);
      const ExactErrors e = compare_exact(r, spec.exact_x, spec.exact_u);
      const double nan = std::nan("");
      summary.add_text_row({to_string(pipeline), std::to_string(N),
                            r.solution.converged ? "true" : "false",
                            format_number(r.solution.residual_norm),
                            std::to_string(r.solution.iterations), format_number(r.T),
                            format_number(spec.exact_x ? e.state : nan),
                            format_number(spec.exact_u ? e.control : nan), format_number(r.cost),
                            format_number(r.stationarity)});
      out.write("traj_" + short_name(pipeline) + "_N" + std::to_string(N) + ".csv",
                trajectory_csv(r, spec.exact_x, spec.exact_u));
      const std::string tag = short_name(pipeline) + "_N" + std::to_string(N);
      out.note(tag + ".converged", r.solution.converged ? "true" : "false");
      out.note(tag + ".residual_norm", format_number(r.solution.residual_norm));
      for (std::size_t k = 0; k < r.transversality_names.size(); ++k) {
        out.note(tag + ".transversality." + r.transversality_names[k],
                 format_number(r.transversality[static_cast<Eigen::Index>(k)]));
      }
      if (!r.solution.converged) {
        all_converged = false;
        out.note(tag + ".message", r.solution.message);
        std::cerr << "warning: " << to_string(pipeline) << " N=" << N
                  << " did not converge (residual " << r.solution.residual_norm << ")\n";
      }
      results.push_back(std::move(r));
    }
  }
  out.write("summary.csv", summary.str());

  const bool free_time = is_free_time(spec.problem.terminal);
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      const PipelineResult& a = results[i];
      const PipelineResult& b = results[j];
      if (a.N != b.N || a.pipeline == b.pipeline) continue;
      const std::string tag = "N" + std::to_string(a.N);
      out.note("max_x_discrepancy_" + tag, format_number(max_discrepancy(a, b)));
      if (free_time) out.note("T_difference_" + tag, format_number(std::abs(a.T - b.T)));
    }
  }
  if (free_time) {
    for (Pipeline pipeline : spec.pipelines) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& r : results) {
        if (r.pipeline != pipeline) continue;
        lo = std::min(lo, r.T);
        hi = std::max(hi, r.T);
      }
      out.note("T_spread_" + short_name(pipeline), format_number(hi - lo));
    }
  }
  return all_converged ? kSuccess : kNotConverged;
}

}  // namespace

int cmd_approx(const ApproxArgs& args) {
  if (args.n.empty() || args.N.empty()) throw ValidationError("empty n or N sweep");
  if (args.grid < 2) throw ValidationError("grid must have at least 2 nodes");
  if (args.alpha <= 0.0 || args.alpha == std::floor(args.alpha)) {
    throw ValidationError("alpha must be positive and non-integer (got " +
                          short_number(args.alpha) + ")");
  }
  // Validate the whole sweep before writing anything.
  for (int n : args.n) {
    for (int N : args.N) {
      ExpansionScheme::build(args.alpha, n, N);
      if (n == 2 && args.alpha >= 1.0) {
        throw ValidationError("the n = 2 layout needs alpha in (0, 1)");
      }
    }
  }
  const TestFunction fn = make_test_function(args.fn, args.alpha, args.b);
  const Grid grid = Grid::make(0.0, args.b, args.grid);

  RunOutput out(args.out, "approx");
  out.parameter("fn", args.fn);
  out.parameter("alpha", short_number(args.alpha));
  out.parameter("n", join(args.n));
  out.parameter("N", join(args.N));
  out.parameter("grid", std::to_string(args.grid));
  out.parameter("kind", args.caputo ? "caputo" : "rl");

  csv::Table summary({"fn", "alpha", "n", "N", "max_abs_error", "error_at_end", "bound_at_end"});
  const std::string fn_tag = args.fn.rfind("poly:", 0) == 0 ? "poly" : args.fn;
  for (int n : args.n) {
    for (int N : args.N) {
      const ExpansionScheme scheme = ExpansionScheme::build(args.alpha, n, N);
      const ApproximationRun run = args.caputo
                                       ? approximate_caputo_derivative(fn.x, scheme, grid, fn.caputo)
                                       : approximate_rl_derivative(fn.x, scheme, grid, fn.rl);
      double bound = std::nan("");
      if (n - 1 - args.alpha > 0.0) {
        bound = truncation_error_bound(scheme, fn.derivative_bound(n, args.b), args.b);
      }
      const std::string name = "approx_" + fn_tag + "_" + short_number(args.alpha) + "_" +
                               std::to_string(n) + "_" + std::to_string(N) + ".csv";
      out.write(name, run.csv());
      summary.add_text_row({fn_tag, short_number(args.alpha), std::to_string(n), std::to_string(N),
                            format_number(run.max_abs_error),
                            format_number(run.abs_error()[grid.m - 1]), format_number(bound)});
    }
  }
  out.write("summary.csv", summary.str());
  out.finish();
  return kSuccess;
}

int cmd_example1(const ExampleArgs& args) {
  const CatalogEntry entry = example1(args.alpha);
  RunOutput out(args.out, "example1");
  out.parameter("alpha", short_number(args.alpha));
  out.parameter("N", join(args.N));
  out.parameter("pipeline", args.pipeline);
  out.parameter("grid", std::to_string(args.grid));
  const int code = run_suite({entry.problem, entry.exact_x, entry.exact_u,
                              pipelines_from(args.pipeline), args.N, args.grid, args.epsilon,
                              args.tolerance},
                             out);
  out.finish();
  return code;
}

int cmd_example2(const ExampleArgs& args) {
  if (args.bracket.size() != 2) throw ValidationError("bracket needs two values lo,hi");
  const CatalogEntry entry = example2(args.alpha, args.bracket[0], args.bracket[1]);
  entry.problem.validate();
  RunOutput out(args.out, "example2");
  out.parameter("alpha", short_number(args.alpha));
  out.parameter("N", join(args.N));
  out.parameter("pipeline", args.pipeline);
  out.parameter("grid", std::to_string(args.grid));
  out.parameter("bracket", short_number(args.bracket[0]) + "," + short_number(args.bracket[1]));
  const int code = run_suite({entry.problem, {}, {}, pipelines_from(args.pipeline), args.N,
                              args.grid, args.epsilon, args.tolerance},
                             out);
  out.finish();
  return code;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot read config file " + config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const RunConfig cfg = parse_config(buffer.str());

  RunOutput out(out_dir, "solve");
  out.parameter("config", config_path);
  out.parameter("problem", cfg.problem_name);
  out.parameter("terminal", describe(cfg.problem.terminal));
  out.parameter("N", std::to_string(cfg.N));
  out.parameter("grid", std::to_string(cfg.grid));
  const int code = run_suite({cfg.problem, cfg.exact_x, cfg.exact_u, cfg.pipelines, {cfg.N},
                              cfg.grid, cfg.epsilon, cfg.tolerance},
                             out);
  if (const auto* ineq = std::get_if<terminal::FixedTimeInequality>(&cfg.problem.terminal)) {
    out.note("inequality_K", format_number(ineq->K));
  }
  out.finish();
  return code;
}

}  // namespace fracopt::cli
