#pragma once

#include <string>
#include <vector>

#include "fracopt/operators.hpp"

namespace fracopt::cli {

/// Test function for `approx` with closed-form fractional derivatives on [0, b].
struct TestFunction {
  std::string name;
  SampledFunction x;
  /// Left RL and Caputo derivatives anchored at 0.
  std::function<double(double)> rl;
  std::function<double(double)> caputo;
  /// max |x^(k)| on [0, b].
  std::function<double(int k, double b)> derivative_bound;
};

/// Accepts "t4", "exp2t" and "poly:c0,c1,..." (x = sum c_k t^k).
/// Throws ValidationError for anything else.
TestFunction make_test_function(const std::string& spec, double alpha, double b);

}  // namespace fracopt::cli
