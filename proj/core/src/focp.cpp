#include "fracopt/focp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "fracopt/errors.hpp"
#include "fracopt/operators.hpp"
#include "fracopt/special.hpp"

namespace fracopt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double fd_step(double v) { return 1e-6 * (1.0 + std::abs(v)); }

}  // namespace

bool is_free_time(const TerminalSpec& spec) {
  return std::holds_alternative<terminal::FreeTimeFreeState>(spec) ||
         std::holds_alternative<terminal::FreeTimeFixedState>(spec) ||
         std::holds_alternative<terminal::Curve>(spec);
}

std::optional<FreeTime> free_time_bracket(const TerminalSpec& spec) {
  return std::visit(overloaded{
                        [](const terminal::FreeTimeFreeState& s) -> std::optional<FreeTime> {
                          return FreeTime{s.lower, s.upper, s.guess};
                        },
                        [](const terminal::FreeTimeFixedState& s) -> std::optional<FreeTime> {
                          return FreeTime{s.lower, s.upper, s.guess};
                        },
                        [](const terminal::Curve& s) -> std::optional<FreeTime> {
                          return FreeTime{s.lower, s.upper, s.guess};
                        },
                        [](const auto&) -> std::optional<FreeTime> { return std::nullopt; },
                    },
                    spec);
}

double nominal_horizon(const TerminalSpec& spec) {
  if (auto bracket = free_time_bracket(spec)) {
    return bracket->guess.value_or(0.5 * (bracket->lower + bracket->upper));
  }
  return std::visit(overloaded{
                        [](const terminal::FixedTimeFreeState& s) { return s.T; },
                        [](const terminal::FixedTimeFixedState& s) { return s.T; },
                        [](const terminal::FixedTimeInequality& s) { return s.T; },
                        [](const auto&) { return 0.0; },
                    },
                    spec);
}

std::string describe(const TerminalSpec& spec) {
  return std::visit(
      overloaded{
          [](const terminal::FreeTimeFreeState&) { return std::string("free T, free x(T)"); },
          [](const terminal::FixedTimeFreeState&) { return std::string("fixed T, free x(T)"); },
          [](const terminal::FreeTimeFixedState&) { return std::string("free T, fixed x(T)"); },
          [](const terminal::FixedTimeFixedState&) { return std::string("fixed T, fixed x(T)"); },
          [](const terminal::Curve&) { return std::string("x(T) on a curve"); },
          [](const terminal::FixedTimeInequality&) { return std::string("fixed T, x(T) >= K"); },
      },
      spec);
}

void FocpProblem::validate() const {
  if (M == 0.0 && N == 0.0) throw ValidationError("(M, N) must not be (0, 0)");
  if (!std::isfinite(M) || !std::isfinite(N)) throw ValidationError("M and N must be finite");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!std::isfinite(a) || !std::isfinite(x_a)) throw ValidationError("a and x_a must be finite");
  if (A() < a) throw ValidationError("cost start A must satisfy A >= a");
  if (!L) throw ValidationError("running cost L is missing");
  if (!f) throw ValidationError("dynamics f is missing");
  if (auto bracket = free_time_bracket(terminal)) {
    if (!(bracket->lower < bracket->upper)) {
      throw BracketError("free-time bracket [" + std::to_string(bracket->lower) + ", " +
                         std::to_string(bracket->upper) + "] is degenerate");
    }
    if (bracket->lower <= a) throw ValidationError("free-time bracket must lie above a");
  } else if (nominal_horizon(terminal) <= a) {
    throw ValidationError("terminal time must exceed a");
  }
  if (const auto* curve = std::get_if<terminal::Curve>(&terminal)) {
    if (!curve->gamma || !curve->gamma_dot) {
      throw ValidationError("terminal curve needs gamma and its derivative");
    }
  }
}

std::vector<std::string> complete_partials(FocpProblem& problem) {
  std::vector<std::string> warnings;
  const auto fill3 = [&](Fn3& target, const Fn3& base, bool wrt_x, const char* name) {
    if (target || !base) return;
    target = [base, wrt_x](double t, double x, double u) {
      if (wrt_x) {
        const double h = fd_step(x);
        return (base(t, x + h, u) - base(t, x - h, u)) / (2.0 * h);
      }
      const double h = fd_step(u);
      return (base(t, x, u + h) - base(t, x, u - h)) / (2.0 * h);
    };
    warnings.push_back(std::string(name) + " approximated by central differences");
  };
  fill3(problem.L_x, problem.L, true, "L_x");
  fill3(problem.L_u, problem.L, false, "L_u");
  fill3(problem.f_x, problem.f, true, "f_x");
  fill3(problem.f_u, problem.f, false, "f_u");

  if (!problem.phi) {
    problem.phi = [](double, double) { return 0.0; };
    if (!problem.phi_t) problem.phi_t = problem.phi;
    if (!problem.phi_x) problem.phi_x = problem.phi;
  }
  const Fn2 phi = problem.phi;
  if (!problem.phi_t) {
    problem.phi_t = [phi](double t, double x) {
      const double h = fd_step(t);
      return (phi(t + h, x) - phi(t - h, x)) / (2.0 * h);
    };
    warnings.emplace_back("phi_t approximated by central differences");
  }
  if (!problem.phi_x) {
    problem.phi_x = [phi](double t, double x) {
      const double h = fd_step(x);
      return (phi(t, x + h) - phi(t, x - h)) / (2.0 * h);
    };
    warnings.emplace_back("phi_x approximated by central differences");
  }
  return warnings;
}

double Hamiltonian::value(double t, double x, double u, double lambda) const {
  return problem_->L(t, x, u) + lambda * problem_->f(t, x, u);
}
double Hamiltonian::H_x(double t, double x, double u, double lambda) const {
  return problem_->L_x(t, x, u) + lambda * problem_->f_x(t, x, u);
}
double Hamiltonian::H_u(double t, double x, double u, double lambda) const {
  return problem_->L_u(t, x, u) + lambda * problem_->f_u(t, x, u);
}
double Hamiltonian::H_lambda(double t, double x, double u, double) const {
  return problem_->f(t, x, u);
}

double stationary_control(const FocpProblem& problem, double t, double x, double mu) {
  if (problem.control_law) return problem.control_law(t, x, mu);
  if (!problem.implicit_control) {
    throw CapabilityError("no closed-form control law and implicit solves are disabled");
  }
  if (!problem.L_u || !problem.f_u) throw CapabilityError("stationary solve needs L_u and f_u");
  const auto g = [&](double u) { return problem.L_u(t, x, u) + mu * problem.f_u(t, x, u); };

  double u = problem.control_guess;
  double gu = g(u);
  for (int iter = 0; iter < 100; ++iter) {
    if (std::abs(gu) <= 1e-12) return u;
    const double h = fd_step(u);
    const double slope = (g(u + h) - g(u - h)) / (2.0 * h);
    if (!std::isfinite(slope) || slope == 0.0) break;
    const double step = gu / slope;
    double damping = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, damping *= 0.5) {
      const double trial = u - damping * step;
      const double g_trial = g(trial);
      if (std::isfinite(g_trial) && std::abs(g_trial) < std::abs(gu)) {
        u = trial;
        gu = g_trial;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (std::abs(damping * step) <= 1e-14 * (1.0 + std::abs(u))) return u;
  }
  if (std::abs(gu) <= 1e-10) return u;
  std::ostringstream os;
  os << "stationary condition H_u = 0 not solved at t = " << t << " (|H_u| = " << std::abs(gu)
     << ")";
  throw CapabilityError(os.str());
}

double OptimalityConditions::adjoint_rhs(double t, double x, double u, double lambda) const {
  return -Hamiltonian(problem).H_x(t, x, u, lambda);
}

OptimalityConditions assemble_conditions(FocpProblem problem) {
  problem.validate();
  if (problem.A() > problem.a) {
    throw UnsupportedVariantError(
        "cost integral starting after the derivative anchor (A > a) is not supported by the "
        "solver; its extra conditions are available only as a posteriori residuals");
  }
  OptimalityConditions conditions;
  conditions.warnings = complete_partials(problem);
  conditions.problem = std::move(problem);
  conditions.transversality = std::visit(
      overloaded{
          [](const terminal::FreeTimeFreeState&) {
            return std::vector<std::string>{"costate", "hamiltonian"};
          },
          [](const terminal::FixedTimeFreeState&) { return std::vector<std::string>{"costate"}; },
          [](const terminal::FreeTimeFixedState&) {
            return std::vector<std::string>{"hamiltonian"};
          },
          [](const terminal::FixedTimeFixedState&) { return std::vector<std::string>{}; },
          [](const terminal::Curve&) { return std::vector<std::string>{"curve"}; },
          [](const terminal::FixedTimeInequality&) {
            return std::vector<std::string>{"inequality", "complementarity"};
          },
      },
      conditions.problem.terminal);
  return conditions;
}

double fischer_burmeister(double a, double b) { return a + b - std::hypot(a, b); }

Vector evaluate_transversality(const OptimalityConditions& conditions,
                               const TerminalSample& sample, double T) {
  const auto& names = conditions.transversality;
  Vector r(static_cast<Eigen::Index>(names.size()));
  if (names.empty()) return r;

  const auto need = [](const std::optional<double>& v, const char* channel) {
    if (!v) throw IncompleteInputError(std::string("transversality needs channel ") + channel);
    return *v;
  };
  const FocpProblem& p = conditions.problem;
  const double t = sample.t.value_or(T);
  const double x = need(sample.x, "x");
  const double lambda = need(sample.lambda, "lambda");
  const double I = sample.right_integral_lambda;

  const auto costate = [&] { return p.M * lambda + p.N * I - p.phi_x(t, x); };
  const auto hamiltonian = [&] {
    const double u = need(sample.u, "u");
    const double x_dot = need(sample.x_dot, "x_dot");
    const double caputo = p.N != 0.0 ? need(sample.caputo_x, "caputo_x") : 0.0;
    return Hamiltonian(p).value(t, x, u, lambda) - p.N * lambda * caputo + p.N * x_dot * I +
           p.phi_t(t, x);
  };

  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const std::string& name = names[k];
    if (name == "costate" || name == "inequality") {
      r[i] = costate();
    } else if (name == "hamiltonian") {
      r[i] = hamiltonian();
    } else if (name == "curve") {
      const auto& curve = std::get<terminal::Curve>(p.terminal);
      r[i] = hamiltonian() - curve.gamma_dot(t) * costate();
    } else if (name == "complementarity") {
      const auto& ineq = std::get<terminal::FixedTimeInequality>(p.terminal);
      r[i] = (x - ineq.K) * costate();
    }
  }
  return r;
}

SufficiencyReport check_sufficiency(const FocpProblem& problem, const Vector& lambda_samples) {
  SufficiencyReport report;
  report.convexity = problem.L_convex && problem.f_convex && problem.phi_convex;
  report.fixed_time = !is_free_time(problem.terminal);
  report.f_linear = problem.f_linear;
  report.lambda_nonnegative = lambda_samples.size() > 0 && (lambda_samples.array() >= 0.0).all();
  if (!report.convexity) report.notes.emplace_back("convexity of L, f and phi not declared");
  if (!report.fixed_time) report.notes.emplace_back("terminal time is free");
  if (!report.lambda_nonnegative && !report.f_linear) {
    report.notes.emplace_back("costate changes sign and f is not declared linear");
  }
  const bool sign_or_linear = report.lambda_nonnegative || report.f_linear;
  report.verdict = report.convexity && report.fixed_time && sign_or_linear
                       ? Verdict::Sufficient
                       : Verdict::Inconclusive;
  return report;
}

ShootingProblem fractional_shooting_problem(const OptimalityConditions& conditions,
                                            const ApproximationOptions& options) {
  const FocpProblem& p = conditions.problem;
  const bool fractional = p.N != 0.0;
  const int moments = fractional ? options.N - 1 : 0;
  if (fractional && options.N < 2) throw ParameterError("expansion truncation N must be >= 2");
  if (!(options.epsilon >= 0.0 && options.epsilon < 0.5)) {
    throw ParameterError("epsilon must lie in [0, 0.5)");
  }
  const LegacyCoefficients c =
      fractional ? ExpansionScheme::build(p.alpha, 2, options.N).legacy()
                 : LegacyCoefficients{0.0, 0.0, {}};
  const double eps = fractional ? options.epsilon : 0.0;
  const int il = 1 + moments;

  ShootingProblem sp;
  sp.dimension = 2 * (1 + moments);
  const double alpha = p.alpha;
  const double a = p.a;
  const double caputo_shift = fractional ? p.N * p.x_a * reciprocal_gamma(1.0 - alpha) : 0.0;

  sp.interval = [a, eps](double T) {
    const double shift = eps * (T - a);
    return std::make_pair(a + shift, T - shift);
  };

  const auto conditions_ptr = std::make_shared<OptimalityConditions>(conditions);
  sp.field = [conditions_ptr, c, moments, il, alpha, a, caputo_shift](double t, const Vector& y,
                                                                      double T) {
    const FocpProblem& q = conditions_ptr->problem;
    const double x = y[0];
    const double lambda = y[il];
    const double u = conditions_ptr->control(t, x, lambda);
    Vector dy(y.size());

    const double s = t - a;
    double num = q.f(t, x, u);
    double den = q.M;
    if (moments > 0) {
      num += -q.N * c.A * std::pow(s, -alpha) * x + caputo_shift * std::pow(s, -alpha);
      for (int k = 1; k <= moments; ++k) {
        const int pidx = k + 1;
        num += q.N * c.c(pidx) * std::pow(s, 1.0 - pidx - alpha) * y[k];
        dy[k] = (1.0 - pidx) * std::pow(s, pidx - 2) * x;
      }
      den += q.N * c.B * std::pow(s, 1.0 - alpha);
    }
    dy[0] = num / den;

    const double r = T - t;
    double num_l = conditions_ptr->adjoint_rhs(t, x, u, lambda);
    double den_l = q.M;
    if (moments > 0) {
      num_l += q.N * c.A * std::pow(r, -alpha) * lambda;
      for (int k = 1; k <= moments; ++k) {
        const int pidx = k + 1;
        num_l -= q.N * c.c(pidx) * std::pow(r, 1.0 - pidx - alpha) * y[il + k];
        dy[il + k] = -(1.0 - pidx) * std::pow(r, pidx - 2) * lambda;
      }
      den_l += q.N * c.B * std::pow(r, 1.0 - alpha);
    }
    dy[il] = num_l / den_l;
    return dy;
  };

  sp.known_initial.emplace_back(0, p.x_a);
  for (int k = 1; k <= moments; ++k) sp.known_initial.emplace_back(k, 0.0);
  for (int k = 0; k <= moments; ++k) {
    sp.unknown_initial.push_back(il + k);
    sp.unknown_guess.push_back(0.0);
  }
  if (moments > 0 && p.x_a != 0.0) {
    // Moments of the constant x_a over the skipped interval [a, a + eps (T - a)].
    const double x_a = p.x_a;
    sp.initial_adjust = [moments, x_a, eps, a](double T, Vector& y0) {
      const double s0 = eps * (T - a);
      for (int k = 1; k <= moments; ++k) y0[k] = -x_a * std::pow(s0, k);
    };
  }

  sp.free_time = free_time_bracket(p.terminal);
  sp.horizon = nominal_horizon(p.terminal);

  auto field = sp.field;
  sp.residual = [conditions_ptr, field, moments, il](double t_end, const Vector& y, double T) {
    const OptimalityConditions& cond = *conditions_ptr;
    const FocpProblem& q = cond.problem;
    const double x = y[0];
    const double lambda = y[il];
    TerminalSample sample;
    sample.t = t_end;
    sample.x = x;
    sample.lambda = lambda;
    sample.u = cond.control(t_end, x, lambda);
    const double x_dot = field(t_end, y, T)[0];
    sample.x_dot = x_dot;
    if (q.N != 0.0) sample.caputo_x = (q.f(t_end, x, *sample.u) - q.M * x_dot) / q.N;
    const Vector tv = evaluate_transversality(cond, sample, T);

    std::vector<double> r;
    std::optional<double> time_residual;
    std::visit(overloaded{
                   [&](const terminal::FreeTimeFreeState&) {
                     r.push_back(tv[0]);
                     time_residual = tv[1];
                   },
                   [&](const terminal::FixedTimeFreeState&) { r.push_back(tv[0]); },
                   [&](const terminal::FreeTimeFixedState& s) {
                     r.push_back(x - s.x_T);
                     time_residual = tv[0];
                   },
                   [&](const terminal::FixedTimeFixedState& s) { r.push_back(x - s.x_T); },
                   [&](const terminal::Curve& s) {
                     r.push_back(x - s.gamma(T));
                     time_residual = tv[0];
                   },
                   [&](const terminal::FixedTimeInequality& s) {
                     r.push_back(fischer_burmeister(x - s.K, -tv[0]));
                   },
               },
               q.terminal);
    for (int k = 1; k <= moments; ++k) r.push_back(y[il + k]);
    if (time_residual) r.push_back(*time_residual);
    return Vector(Eigen::Map<Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  sp.residual_count = sp.unknown_count();
  const TerminalSpec& p_terminal = p.terminal;
  // With a prescribed terminal state, T can also be bracketed by where x
  // reaches it.
  if (std::holds_alternative<terminal::FreeTimeFixedState>(p_terminal) ||
      std::holds_alternative<terminal::Curve>(p_terminal)) {
    sp.alternate_time_residual_index = 0;
  }

  sp.channel_names.emplace_back("x");
  for (int k = 1; k <= moments; ++k) sp.channel_names.push_back("V" + std::to_string(k + 1));
  sp.channel_names.emplace_back("lambda");
  for (int k = 1; k <= moments; ++k) sp.channel_names.push_back("W" + std::to_string(k + 1));
  return sp;
}

namespace {

// Natural cubic spline through (times, values).
class Spline {
 public:
  Spline(const Vector& t, const Vector& y) : t_(t), y_(y), m_(Vector::Zero(t.size())) {
    const Eigen::Index n = t.size();
    if (n < 3) return;
    Vector diag(n - 2), rhs(n - 2), off(n - 2);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double h0 = t[i] - t[i - 1];
      const double h1 = t[i + 1] - t[i];
      diag[i - 1] = 2.0 * (h0 + h1);
      off[i - 1] = h1;
      rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    for (Eigen::Index i = 1; i < n - 2; ++i) {
      const double w = off[i - 1] / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (Eigen::Index i = n - 3; i >= 0; --i) {
      const double next = (i + 1 < n - 2) ? m_[i + 2] : 0.0;
      m_[i + 1] = (rhs[i] - off[i] * next) / diag[i];
    }
  }

  double value(double x) const { return eval(x, 0); }
  double slope(double x) const { return eval(x, 1); }

 private:
  double eval(double x, int order) const {
    const Eigen::Index n = t_.size();
    const auto it = std::upper_bound(t_.data(), t_.data() + n, x);
    Eigen::Index i = std::clamp<Eigen::Index>(it - t_.data() - 1, 0, n - 2);
    const double h = t_[i + 1] - t_[i];
    const double A = (t_[i + 1] - x) / h;
    const double B = (x - t_[i]) / h;
    if (order == 0) {
      return A * y_[i] + B * y_[i + 1] +
             ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    }
    return (y_[i + 1] - y_[i]) / h +
           (-(3.0 * A * A - 1.0) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
  }

  Vector t_, y_, m_;
};

}  // namespace

Vector cost_start_residuals(const FocpProblem& problem, const Vector& times, const Vector& lambda,
                            double T) {
  if (times.size() != lambda.size() || times.size() < 3) {
    throw IncompleteInputError("cost start residuals need matching time and costate samples");
  }
  const double a = problem.a;
  const double A = problem.A();
  if (times[0] > a || times[times.size() - 1] < T || !(A < T)) {
    throw IncompleteInputError("costate samples must cover [a, T] with A < T");
  }
  const auto spline = std::make_shared<Spline>(times, lambda);
  const SampledFunction lam([spline](double t) { return spline->value(t); }, times[0],
                            times[times.size() - 1],
                            {[spline](double t) { return spline->slope(t); }});
  const double alpha = problem.alpha;
  Vector r = Vector::Zero(2);
  if (A > a) {
    for (int k = 1; k <= 5; ++k) {
      const double t = a + (A - a) * k / 6.0;
      const double diff =
          rl_derivative_right(lam, alpha, T, t) - rl_derivative_right(lam, alpha, A, t);
      r[0] = std::max(r[0], std::abs(diff));
    }
  }
  r[1] = rl_integral_right(lam, 1.0 - alpha, T, a) - rl_integral_right(lam, 1.0 - alpha, A, a);
  return r;
}

}  // namespace fracopt
