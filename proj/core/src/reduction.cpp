#include "fracopt/reduction.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "fracopt/errors.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

double ReducedOcp::denominator(double t) const {
  if (moment_count() == 0) return problem.M;
  return problem.M + problem.N * coefficients.B * std::pow(t - problem.a, 1.0 - problem.alpha);
}

Vector ReducedOcp::dynamics(double t, const Vector& state, double u) const {
  const int k_max = moment_count();
  const double x = state[0];
  Vector d(dimension());
  double num = problem.f(t, x, u);
  if (k_max > 0) {
    const double s = t - problem.a;
    const double alpha = problem.alpha;
    const double s_alpha = std::pow(s, -alpha);
    num += problem.N * (problem.x_a * reciprocal_gamma(1.0 - alpha) - coefficients.A * x) * s_alpha;
    for (int k = 1; k <= k_max; ++k) {
      const int p = k + 1;
      num += problem.N * coefficients.c(p) * std::pow(s, 1.0 - p - alpha) * state[k];
      d[k] = (1.0 - p) * std::pow(s, p - 2) * x;
    }
  }
  d[0] = num / denominator(t);
  return d;
}

double ReducedOcp::dynamics_x(double t, const Vector& state, double u) const {
  double fx = problem.f_x(t, state[0], u);
  if (moment_count() > 0) fx -= problem.N * coefficients.A * std::pow(t - problem.a, -problem.alpha);
  return fx / denominator(t);
}

Vector ReducedOcp::initial_state(double T) const {
  Vector y0 = Vector::Zero(dimension());
  y0[0] = problem.x_a;
  const double s0 = epsilon * (T - problem.a);
  for (int k = 1; k <= moment_count(); ++k) y0[k] = -problem.x_a * std::pow(s0, k);
  return y0;
}

std::pair<double, double> ReducedOcp::interval(double T) const {
  return {problem.a + epsilon * (T - problem.a), T};
}

ReducedOcp reduce(const FocpProblem& problem, const ExpansionScheme& scheme, double epsilon) {
  problem.validate();
  if (problem.A() > problem.a) {
    throw UnsupportedVariantError("reduction with a cost integral starting after a is not supported");
  }
  if (scheme.order() != 2 || scheme.side() != Side::Left) {
    throw ParameterError("reduction needs the left n = 2 expansion scheme");
  }
  if (std::abs(scheme.alpha() - problem.alpha) > 1e-15) {
    throw ParameterError("reduction: scheme alpha differs from the problem's alpha");
  }
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in [0, 0.5)");

  ReducedOcp out;
  out.problem = problem;
  complete_partials(out.problem);
  if (problem.N != 0.0) {
    out.coefficients = scheme.legacy();
    out.epsilon = epsilon;
  }

  double horizon = nominal_horizon(problem.terminal);
  if (auto bracket = free_time_bracket(problem.terminal)) horizon = bracket->upper;
  const int checks = 1000;
  const double first = out.denominator(problem.a + (horizon - problem.a) / checks);
  for (int i = 1; i <= checks; ++i) {
    const double t = problem.a + (horizon - problem.a) * i / checks;
    const double den = out.denominator(t);
    if (den == 0.0 || !std::isfinite(den) || (den > 0.0) != (first > 0.0)) {
      std::ostringstream os;
      os << "reduced dynamics denominator M + N B (t-a)^(1-alpha) vanishes or changes sign near t = "
         << t;
      throw SingularReductionError(os.str());
    }
  }
  return out;
}

double ReducedConditions::control(double t, const Vector& y) const {
  const double mu = y[ocp.dimension()] / ocp.denominator(t);
  return stationary_control(ocp.problem, t, y[0], mu);
}

Vector ReducedConditions::field(double t, const Vector& y) const {
  const int d = ocp.dimension();
  const int k_max = ocp.moment_count();
  const FocpProblem& p = ocp.problem;
  const Vector state = y.head(d);
  const double x = y[0];
  const double l1 = y[d];
  const double u = control(t, y);

  Vector dy(2 * d);
  dy.head(d) = ocp.dynamics(t, state, u);
  double dl1 = -p.L_x(t, x, u) - l1 * ocp.dynamics_x(t, state, u);
  if (k_max > 0) {
    const double s = t - p.a;
    const double den = ocp.denominator(t);
    for (int k = 1; k <= k_max; ++k) {
      const int q = k + 1;
      dl1 += (q - 1.0) * std::pow(s, q - 2) * y[d + k];
      dy[d + k] = -l1 * p.N * ocp.coefficients.c(q) * std::pow(s, 1.0 - q - p.alpha) / den;
    }
  }
  dy[d] = dl1;
  return dy;
}

double ReducedConditions::hamiltonian(double t, const Vector& y) const {
  const int d = ocp.dimension();
  const double u = control(t, y);
  const Vector rates = ocp.dynamics(t, y.head(d), u);
  return ocp.problem.L(t, y[0], u) + y.tail(d).dot(rates);
}

Vector ReducedConditions::phi(double t, const Vector& y) const {
  const int d = ocp.dimension();
  const auto rate = [&](const Vector& z) { return ocp.dynamics(t, z.head(d), control(t, z))[0]; };
  Vector out(d + 2);
  const auto partial = [&](int index) {
    const double h = 1e-6 * (1.0 + std::abs(y[index]));
    Vector up = y, down = y;
    up[index] += h;
    down[index] -= h;
    return (rate(up) - rate(down)) / (2.0 * h);
  };
  out[0] = 0.5 * partial(d);
  double affine = rate(y) - 2.0 * out[0] * y[d];
  for (int k = 0; k < d; ++k) {
    out[k + 1] = partial(k);
    affine -= out[k + 1] * y[k];
  }
  out[d + 1] = affine;
  return out;
}

Vector ReducedConditions::evaluate_transversality(double t, const Vector& y) const {
  const int d = ocp.dimension();
  const FocpProblem& p = ocp.problem;
  const double x = y[0];
  const double costate = y[d] - p.phi_x(t, x);
  Vector r(static_cast<Eigen::Index>(transversality.size()));
  for (std::size_t k = 0; k < transversality.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const std::string& name = transversality[k];
    if (name == "costate" || name == "inequality") {
      r[i] = costate;
    } else if (name == "hamiltonian") {
      r[i] = hamiltonian(t, y) + p.phi_t(t, x);
    } else if (name == "curve") {
      const auto& curve = std::get<terminal::Curve>(p.terminal);
      r[i] = hamiltonian(t, y) + p.phi_t(t, x) - curve.gamma_dot(t) * costate;
    } else if (name == "complementarity") {
      r[i] = (x - std::get<terminal::FixedTimeInequality>(p.terminal).K) * costate;
    }
  }
  return r;
}

std::vector<std::string> ReducedConditions::channel_names() const {
  std::vector<std::string> names{"x"};
  for (int k = 1; k <= ocp.moment_count(); ++k) names.push_back("V" + std::to_string(k + 1));
  names.emplace_back("lambda1");
  for (int k = 1; k <= ocp.moment_count(); ++k) names.push_back("lambda" + std::to_string(k + 1));
  return names;
}

ShootingProblem ReducedConditions::shooting_problem() const {
  const auto self = std::make_shared<ReducedConditions>(*this);
  const int d = ocp.dimension();
  const int k_max = ocp.moment_count();

  ShootingProblem sp;
  sp.dimension = 2 * d;
  sp.field = [self](double t, const Vector& y, double) { return self->field(t, y); };
  sp.interval = [self](double T) { return self->ocp.interval(T); };
  sp.free_time = free_time_bracket(ocp.problem.terminal);
  sp.horizon = nominal_horizon(ocp.problem.terminal);

  const Vector y0 = ocp.initial_state(sp.horizon);
  for (int k = 0; k < d; ++k) sp.known_initial.emplace_back(k, y0[k]);
  for (int k = 0; k < d; ++k) {
    sp.unknown_initial.push_back(d + k);
    sp.unknown_guess.push_back(0.0);
  }
  if (k_max > 0 && ocp.problem.x_a != 0.0) {
    sp.initial_adjust = [self, d](double T, Vector& y) { y.head(d) = self->ocp.initial_state(T); };
  }

  sp.residual = [self, d, k_max](double t_end, const Vector& y, double T) {
    const FocpProblem& p = self->ocp.problem;
    const Vector tv = self->evaluate_transversality(t_end, y);
    const double x = y[0];
    std::vector<double> r;
    std::optional<double> time_residual;
    if (std::holds_alternative<terminal::FreeTimeFreeState>(p.terminal)) {
      r.push_back(tv[0]);
      time_residual = tv[1];
    } else if (std::holds_alternative<terminal::FixedTimeFreeState>(p.terminal)) {
      r.push_back(tv[0]);
    } else if (const auto* s = std::get_if<terminal::FreeTimeFixedState>(&p.terminal)) {
      r.push_back(x - s->x_T);
      time_residual = tv[0];
    } else if (const auto* s = std::get_if<terminal::FixedTimeFixedState>(&p.terminal)) {
      r.push_back(x - s->x_T);
    } else if (const auto* s = std::get_if<terminal::Curve>(&p.terminal)) {
      r.push_back(x - s->gamma(T));
      time_residual = tv[0];
    } else if (const auto* s = std::get_if<terminal::FixedTimeInequality>(&p.terminal)) {
      r.push_back(fischer_burmeister(x - s->K, -tv[0]));
    }
    for (int k = 1; k <= k_max; ++k) r.push_back(y[d + k]);
    if (time_residual) r.push_back(*time_residual);
    return Vector(Eigen::Map<Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  sp.residual_count = sp.unknown_count();
  const TerminalSpec& p_terminal = ocp.problem.terminal;
  // With a prescribed terminal state, T can also be bracketed by where x
  // reaches it.
  if (std::holds_alternative<terminal::FreeTimeFixedState>(p_terminal) ||
      std::holds_alternative<terminal::Curve>(p_terminal)) {
    sp.alternate_time_residual_index = 0;
  }
  sp.channel_names = channel_names();
  return sp;
}

ReducedConditions classical_conditions(const ReducedOcp& reduced, const TerminalSpec& terminal) {
  ReducedConditions out;
  out.ocp = reduced;
  out.ocp.problem.terminal = terminal;
  out.ocp.problem.validate();
  if (!out.ocp.problem.control_law && !out.ocp.problem.implicit_control) {
    throw CapabilityError("control cannot be eliminated: no control law and implicit solves disabled");
  }
  out.transversality = assemble_conditions(out.ocp.problem).transversality;
  return out;
}

}  // namespace fracopt
