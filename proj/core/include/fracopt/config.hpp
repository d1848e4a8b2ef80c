#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracopt/focp.hpp"
#include "fracopt/pipelines.hpp"

namespace fracopt {

/// Problem run described by a `key = value` file (`#` starts a comment).
///
///   problem     = example1 | example2 | lq | tracking   (required)
///   alpha, a, cost_start, M, N, x_a                     (override the catalog)
///   terminal    = fixed-free | fixed-fixed | free-free | free-fixed | curve | inequality
///   T, x_T, K, t_bracket = lo,hi, T_guess, curve = c0,c1,...  (gamma(t) = sum c_k t^k)
///   pipeline    = fractional-conditions | reduce-then-classical | both
///   expansion_N, grid, epsilon, tolerance
struct RunConfig {
  std::string problem_name;
  FocpProblem problem;
  /// Carried over from the catalog when no override changes the problem.
  std::function<double(double)> exact_x;
  std::function<double(double)> exact_u;
  std::vector<Pipeline> pipelines{Pipeline::FractionalConditions, Pipeline::ReduceThenClassical};
  int N = 2;
  int grid = 1001;
  double epsilon = 1e-6;
  double tolerance = 1e-10;
};

/// Throws ConfigError (with the line number) on syntax, unknown or duplicate
/// keys and malformed values, and ValidationError when the assembled problem
/// is invalid, e.g. (M, N) = (0, 0).
RunConfig parse_config(const std::string& text);

}  // namespace fracopt
