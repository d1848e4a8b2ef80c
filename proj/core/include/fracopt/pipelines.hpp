#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracopt/focp.hpp"
#include "fracopt/reduction.hpp"
#include "fracopt/tpbvp.hpp"

namespace fracopt {

enum class Pipeline { FractionalConditions, ReduceThenClassical };

std::string to_string(Pipeline pipeline);
/// Accepts "fractional-conditions" / "fractional" and "reduce-then-classical" / "reduced".
std::optional<Pipeline> parse_pipeline(const std::string& text);

struct PipelineOptions {
  ApproximationOptions approximation;
  SolverConfig solver;
};

struct PipelineResult {
  Pipeline pipeline = Pipeline::FractionalConditions;
  int N = 0;
  Solution solution;
  double T = 0.0;
  std::vector<std::string> channel_names;
  Vector t, x, u;
  /// lambda for the fractional pipeline, lambda_1 for the reduced one.
  Vector costate;
  std::vector<std::string> transversality_names;
  Vector transversality;
  /// Cost integral over the integration grid (Simpson) plus phi(T, x(T)).
  double cost = 0.0;
  /// max |H_u| over the grid.
  double stationarity = 0.0;
};

/// Runs one pipeline end to end. Solver non-convergence is reported in the
/// result; validation and singularity problems throw.
PipelineResult run_pipeline(const FocpProblem& problem, Pipeline pipeline,
                            const PipelineOptions& options);

/// Composite Simpson rule on uniform samples (trapezoid on a trailing odd interval).
double simpson(const Vector& t, const Vector& y);

struct ExactErrors {
  /// E = max_i |x(t_i) - xbar(t_i)|.
  double state = 0.0;
  double control = 0.0;
};

ExactErrors compare_exact(const PipelineResult& result, const std::function<double(double)>& x_exact,
                          const std::function<double(double)>& u_exact);

/// Trajectory CSV: t, x, u, then every solver channel, then exact_x / exact_u when given.
std::string trajectory_csv(const PipelineResult& result,
                           const std::function<double(double)>& x_exact = {},
                           const std::function<double(double)>& u_exact = {});

}  // namespace fracopt
