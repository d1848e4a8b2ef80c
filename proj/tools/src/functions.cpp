#include "functions.hpp"

#include <cmath>
#include <sstream>

#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

namespace fracopt::cli {

namespace {

// t^(-alpha) sum_k (c t)^k / Gamma(k + 1 - alpha): RL derivative of e^(c t) from 0.
double rl_exponential(double c, double alpha, double t) {
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double term = power * reciprocal_gamma(k + 1.0 - alpha);
    sum += term;
    if (k > 4 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    power *= c * t;
  }
  return sum * std::pow(t, -alpha);
}

TestFunction polynomial(const std::string& name, std::vector<double> c, double alpha, double b) {
  // k-th derivative by Horner on the coefficients j!/(j-k)! c_j.
  const auto eval = [c](int k, double t) {
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
      double coef = c[j];
      for (int i = 0; i < k; ++i) coef *= static_cast<double>(j) - i;
      v = v * t + coef;
    }
    return v;
  };
  const int degree = static_cast<int>(c.size()) - 1;
  std::vector<SampledFunction::Fn> derivs;
  for (int k = 1; k <= degree + 2; ++k) derivs.push_back([eval, k](double t) { return eval(k, t); });
  TestFunction f{name, SampledFunction([eval](double t) { return eval(0, t); }, 0.0, b, derivs),
                 {}, {}, {}};
  f.rl = [c, alpha](double t) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] != 0.0) v += c[j] * power_rule_rl_derivative(alpha, static_cast<double>(j), t);
    }
    return v;
  };
  f.caputo = [c, alpha](double t) {
    const int n = FractionalOrder::of(alpha).n;
    double v = 0.0;
    for (std::size_t j = static_cast<std::size_t>(n); j < c.size(); ++j) {
      if (c[j] != 0.0) v += c[j] * power_rule_caputo(alpha, static_cast<double>(j), t);
    }
    return v;
  };
  f.derivative_bound = [eval](int k, double upper) {
    double m = 0.0;
    for (int i = 0; i <= 1000; ++i) m = std::max(m, std::abs(eval(k, upper * i / 1000.0)));
    return m;
  };
  return f;
}

}  // namespace

TestFunction make_test_function(const std::string& spec, double alpha, double b) {
  TestFunction f{spec, SampledFunction([](double) { return 0.0; }, 0.0, b), {}, {}, {}};
  if (spec == "t4") {
    f = polynomial(spec, {0.0, 0.0, 0.0, 0.0, 1.0}, alpha, b);
  } else if (spec == "exp2t") {
    std::vector<SampledFunction::Fn> derivs;
    for (int k = 1; k <= 12; ++k) {
      derivs.push_back([k](double t) { return std::pow(2.0, k) * std::exp(2.0 * t); });
    }
    f.x = SampledFunction([](double t) { return std::exp(2.0 * t); }, 0.0, b, derivs);
    f.rl = [alpha](double t) { return rl_exponential(2.0, alpha, t); };
    f.caputo = [alpha](double t) {
      const int n = FractionalOrder::of(alpha).n;
      double v = rl_exponential(2.0, alpha, t);
      for (int k = 0; k < n; ++k) {
        v -= std::pow(2.0, k) * std::pow(t, k - alpha) * reciprocal_gamma(k - alpha + 1.0);
      }
      return v;
    };
    f.derivative_bound = [](int k, double bb) { return std::pow(2.0, k) * std::exp(2.0 * bb); };
  } else if (spec.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("bad polynomial coefficient '" + item + "'");
      }
    }
    if (c.empty()) throw ValidationError("polynomial needs at least one coefficient");
    f = polynomial("poly", c, alpha, b);
  } else {
    throw ValidationError("unknown function '" + spec + "' (expected t4, exp2t or poly:c0,c1,...)");
  }
  if (f.x.b() != b) {
    std::vector<SampledFunction::Fn> derivs;
    for (int k = 1; k <= f.x.derivative_count(); ++k) {
      derivs.push_back([g = f.x, k](double t) { return g.derivative(k, t); });
    }
    f.x = SampledFunction([g = f.x](double t) { return g(t); }, 0.0, b, derivs);
  }
  return f;
}

}  // namespace fracopt::cli
