#include "fracopt/catalog.hpp"

#include <cmath>

#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

namespace {

// Shared cost (t u - (alpha+2) x)^2 and dynamics u + t^2 of both worked examples.
FocpProblem power_law_problem(double alpha) {
  FocpProblem p;
  p.alpha = alpha;
  p.a = 0.0;
  p.M = 1.0;
  p.N = 1.0;
  p.x_a = 0.0;
  const double k = alpha + 2.0;
  p.L = [k](double t, double x, double u) {
    const double r = t * u - k * x;
    return r * r;
  };
  p.L_x = [k](double t, double x, double u) { return -2.0 * k * (t * u - k * x); };
  p.L_u = [k](double t, double x, double u) { return 2.0 * t * (t * u - k * x); };
  p.f = [](double t, double, double u) { return u + t * t; };
  p.f_x = [](double, double, double) { return 0.0; };
  p.f_u = [](double, double, double) { return 1.0; };
  p.control_law = [k](double t, double x, double mu) { return k * x / t - mu / (2.0 * t * t); };
  p.L_convex = true;
  p.f_convex = true;
  p.f_linear = true;
  return p;
}

}  // namespace

CatalogEntry example1(double alpha) {
  CatalogEntry e{"example1", power_law_problem(alpha), {}, {}};
  const double target = 2.0 * reciprocal_gamma(3.0 + alpha);
  e.problem.terminal = terminal::FixedTimeFixedState{1.0, target};
  const double cx = 2.0 * reciprocal_gamma(alpha + 3.0);
  const double cu = 2.0 * reciprocal_gamma(alpha + 2.0);
  e.exact_x = [cx, alpha](double t) { return cx * std::pow(t, alpha + 2.0); };
  e.exact_u = [cu, alpha](double t) { return cu * std::pow(t, alpha + 1.0); };
  return e;
}

CatalogEntry example2(double alpha, double lower, double upper) {
  CatalogEntry e{"example2", power_law_problem(alpha), {}, {}};
  e.problem.terminal = terminal::FreeTimeFixedState{1.0, lower, upper, std::nullopt};
  return e;
}

CatalogEntry lq(double x0, double T) {
  CatalogEntry e;
  e.name = "lq";
  FocpProblem& p = e.problem;
  p.alpha = 0.5;
  p.M = 1.0;
  p.N = 0.0;
  p.x_a = x0;
  p.L = [](double, double x, double u) { return x * x + u * u; };
  p.L_x = [](double, double x, double) { return 2.0 * x; };
  p.L_u = [](double, double, double u) { return 2.0 * u; };
  p.f = [](double, double, double u) { return u; };
  p.f_x = [](double, double, double) { return 0.0; };
  p.f_u = [](double, double, double) { return 1.0; };
  p.control_law = [](double, double, double mu) { return -0.5 * mu; };
  p.terminal = terminal::FixedTimeFreeState{T};
  p.L_convex = p.f_convex = p.f_linear = true;
  const double c = x0 / std::cosh(T);
  e.exact_x = [c, T](double t) { return c * std::cosh(T - t); };
  e.exact_u = [c, T](double t) { return -c * std::sinh(T - t); };
  return e;
}

CatalogEntry tracking(double alpha, double T) {
  CatalogEntry e;
  e.name = "tracking";
  FocpProblem& p = e.problem;
  p.alpha = alpha;
  p.M = 1.0;
  p.N = 1.0;
  p.x_a = 0.0;
  p.L = [](double, double x, double u) { return (x - 1.0) * (x - 1.0) + u * u; };
  p.L_x = [](double, double x, double) { return 2.0 * (x - 1.0); };
  p.L_u = [](double, double, double u) { return 2.0 * u; };
  p.f = [](double, double, double u) { return u; };
  p.f_x = [](double, double, double) { return 0.0; };
  p.f_u = [](double, double, double) { return 1.0; };
  p.control_law = [](double, double, double mu) { return -0.5 * mu; };
  p.terminal = terminal::FixedTimeFreeState{T};
  p.L_convex = p.f_convex = p.f_linear = true;
  return e;
}

std::vector<std::string> catalog_names() { return {"example1", "example2", "lq", "tracking"}; }

CatalogEntry catalog_entry(const std::string& name, double alpha) {
  if (name == "example1") return example1(alpha);
  if (name == "example2") return example2(alpha);
  if (name == "lq") return lq();
  if (name == "tracking") return tracking(alpha);
  throw ValidationError("unknown catalog problem '" + name + "'");
}

}  // namespace fracopt
