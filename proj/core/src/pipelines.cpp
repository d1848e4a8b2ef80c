#include "fracopt/pipelines.hpp"

#include <cmath>

#include "fracopt/csv.hpp"
#include "fracopt/errors.hpp"

namespace fracopt {

std::string to_string(Pipeline pipeline) {
  return pipeline == Pipeline::FractionalConditions ? "fractional-conditions"
                                                    : "reduce-then-classical";
}

std::optional<Pipeline> parse_pipeline(const std::string& text) {
  if (text == "fractional-conditions" || text == "fractional") return Pipeline::FractionalConditions;
  if (text == "reduce-then-classical" || text == "reduced") return Pipeline::ReduceThenClassical;
  return std::nullopt;
}

double simpson(const Vector& t, const Vector& y) {
  const Eigen::Index n = t.size();
  if (n < 2) return 0.0;
  const double h = (t[n - 1] - t[0]) / static_cast<double>(n - 1);
  const Eigen::Index intervals = n - 1;
  const Eigen::Index even = intervals - intervals % 2;
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 2 <= even; i += 2) {
    sum += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  }
  if (even < intervals) sum += 0.5 * h * (y[n - 2] + y[n - 1]);
  return sum;
}

PipelineResult run_pipeline(const FocpProblem& problem, Pipeline pipeline,
                            const PipelineOptions& options) {
  PipelineResult result;
  result.pipeline = pipeline;
  result.N = problem.N != 0.0 ? options.approximation.N : 0;

  std::function<double(double, const Vector&)> control;
  std::function<double(double, const Vector&)> hu;
  std::function<Vector(double, const Vector&, double)> transversality;
  ShootingProblem sp;
  FocpProblem completed;

  if (pipeline == Pipeline::FractionalConditions) {
    const OptimalityConditions conditions = assemble_conditions(problem);
    completed = conditions.problem;
    sp = fractional_shooting_problem(conditions, options.approximation);
    const int il = sp.dimension / 2;
    control = [conditions, il](double t, const Vector& y) {
      return conditions.control(t, y[0], y[il]);
    };
    hu = [conditions, il](double t, const Vector& y) {
      const double u = conditions.control(t, y[0], y[il]);
      return conditions.hamiltonian().H_u(t, y[0], u, y[il]);
    };
    result.transversality_names = conditions.transversality;
    const auto field = sp.field;
    transversality = [conditions, il, field, control](double t, const Vector& y, double T) {
      const FocpProblem& q = conditions.problem;
      TerminalSample s;
      s.t = t;
      s.x = y[0];
      s.lambda = y[il];
      s.u = control(t, y);
      s.x_dot = field(t, y, T)[0];
      if (q.N != 0.0) s.caputo_x = (q.f(t, y[0], *s.u) - q.M * *s.x_dot) / q.N;
      return evaluate_transversality(conditions, s, T);
    };
  } else {
    const ExpansionScheme scheme =
        ExpansionScheme::build(problem.alpha, 2, std::max(2, options.approximation.N));
    const ReducedOcp reduced = reduce(problem, scheme, options.approximation.epsilon);
    const ReducedConditions conditions = classical_conditions(reduced, problem.terminal);
    completed = conditions.ocp.problem;
    sp = conditions.shooting_problem();
    const int d = conditions.ocp.dimension();
    control = [conditions](double t, const Vector& y) { return conditions.control(t, y); };
    hu = [conditions, d](double t, const Vector& y) {
      const FocpProblem& q = conditions.ocp.problem;
      const double u = conditions.control(t, y);
      const double mu = y[d] / conditions.ocp.denominator(t);
      return q.L_u(t, y[0], u) + mu * q.f_u(t, y[0], u);
    };
    result.transversality_names = conditions.transversality;
    transversality = [conditions](double t, const Vector& y, double) {
      return conditions.evaluate_transversality(t, y);
    };
  }

  result.channel_names = sp.channel_names;
  if (const auto* ineq = std::get_if<terminal::FixedTimeInequality>(&problem.terminal)) {
    // Warm start from the free-end solution, or from x(T) = K when that one
    // violates the constraint. Either is a root of the complementarity
    // residual when the multiplier has the right sign.
    FocpProblem guess_problem = problem;
    guess_problem.terminal = terminal::FixedTimeFreeState{ineq->T};
    PipelineResult warm = run_pipeline(guess_problem, pipeline, options);
    if (warm.solution.converged && warm.x[warm.x.size() - 1] < ineq->K) {
      guess_problem.terminal = terminal::FixedTimeFixedState{ineq->T, ineq->K};
      warm = run_pipeline(guess_problem, pipeline, options);
    }
    if (warm.solution.converged) {
      sp.unknown_guess.assign(warm.solution.unknowns.begin(), warm.solution.unknowns.end());
    }
  }
  result.solution = solve_shooting(sp, options.solver);
  const Trajectory& path = result.solution.trajectory;
  result.T = result.solution.horizon.value_or(sp.horizon);
  const int m = path.size();
  const int il = sp.dimension / 2;
  result.t = path.times;
  result.x = path.states.col(0);
  result.costate = path.states.col(il);
  result.u.resize(m);
  Vector running(m);
  for (int i = 0; i < m; ++i) {
    const double t = path.times[i];
    const Vector y = path.states.row(i).transpose();
    result.u[i] = control(t, y);
    running[i] = completed.L(t, y[0], result.u[i]);
    result.stationarity = std::max(result.stationarity, std::abs(hu(t, y)));
  }
  const double t_end = path.times[m - 1];
  result.cost = simpson(path.times, running) + completed.phi(result.T, result.x[m - 1]);
  result.transversality = transversality(t_end, path.final_state(), result.T);
  return result;
}

ExactErrors compare_exact(const PipelineResult& result,
                          const std::function<double(double)>& x_exact,
                          const std::function<double(double)>& u_exact) {
  ExactErrors e;
  for (Eigen::Index i = 0; i < result.t.size(); ++i) {
    if (x_exact) e.state = std::max(e.state, std::abs(result.x[i] - x_exact(result.t[i])));
    if (u_exact) e.control = std::max(e.control, std::abs(result.u[i] - u_exact(result.t[i])));
  }
  return e;
}

std::string trajectory_csv(const PipelineResult& result,
                           const std::function<double(double)>& x_exact,
                           const std::function<double(double)>& u_exact) {
  std::vector<std::string> header{"t", "x", "u"};
  for (std::size_t k = 1; k < result.channel_names.size(); ++k) {
    header.push_back(result.channel_names[k]);
  }
  if (x_exact) header.emplace_back("exact_x");
  if (u_exact) header.emplace_back("exact_u");
  csv::Table table(header);
  const Eigen::MatrixXd& states = result.solution.trajectory.states;
  for (Eigen::Index i = 0; i < result.t.size(); ++i) {
    std::vector<double> row{result.t[i], result.x[i], result.u[i]};
    for (Eigen::Index k = 1; k < states.cols(); ++k) row.push_back(states(i, k));
    if (x_exact) row.push_back(x_exact(result.t[i]));
    if (u_exact) row.push_back(u_exact(result.t[i]));
    table.add_row(row);
  }
  return table.str();
}

}  // namespace fracopt
