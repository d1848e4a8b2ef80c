#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracopt/focp.hpp"

namespace fracopt {

struct CatalogEntry {
  std::string name;
  FocpProblem problem;
  /// Known optimal state and control; empty when no closed form is known.
  std::function<double(double)> exact_x;
  std::function<double(double)> exact_u;
};

/// min int_0^1 (t u - (alpha+2) x)^2 dt, x' + cD^alpha x = u + t^2,
/// x(0) = 0, x(1) = 2 / Gamma(3 + alpha). Exact solution
/// x = 2 t^(alpha+2) / Gamma(alpha+3), u = 2 t^(alpha+1) / Gamma(alpha+2).
CatalogEntry example1(double alpha = 0.5);

/// Same cost and dynamics on a free horizon with x(0) = 0, x(T) = 1.
CatalogEntry example2(double alpha = 0.5, double lower = 1.0, double upper = 1.6);

/// Classical LQ problem (N = 0): min int_0^T x^2 + u^2, x' = u, x(0) = x0,
/// free x(T). Exact x = x0 cosh(T-t) / cosh(T), u = -x0 sinh(T-t) / cosh(T).
CatalogEntry lq(double x0 = 1.0, double T = 1.0);

/// min int_0^T (x - 1)^2 + u^2, x' + cD^alpha x = u, x(0) = 0, free x(T).
CatalogEntry tracking(double alpha = 0.5, double T = 1.0);

std::vector<std::string> catalog_names();
/// Throws ValidationError for an unknown name.
CatalogEntry catalog_entry(const std::string& name, double alpha = 0.5);

}  // namespace fracopt
