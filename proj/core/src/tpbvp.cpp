#include "fracopt/tpbvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracopt/csv.hpp"
#include "fracopt/errors.hpp"

namespace fracopt {

Vector rk4_step(const Field& field, double t, const Vector& y, double h) {
  const Vector k1 = field(t, y);
  const Vector k2 = field(t + 0.5 * h, y + 0.5 * h * k1);
  const Vector k3 = field(t + 0.5 * h, y + 0.5 * h * k2);
  const Vector k4 = field(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_rk4(const Field& field, double t0, double t1, const Vector& y0, int m) {
  if (m < 2) throw ParameterError("integrate_rk4: need at least two nodes");
  Trajectory out;
  out.times.resize(m);
  out.states.resize(m, y0.size());
  const double h = (t1 - t0) / (m - 1);
  Vector y = y0;
  out.times[0] = t0;
  out.states.row(0) = y.transpose();
  for (int i = 0; i + 1 < m; ++i) {
    const double t = t0 + i * h;
    y = rk4_step(field, t, y, h);
    if (!y.allFinite()) {
      std::ostringstream os;
      os << "integration blew up between t = " << t << " and t = " << t + h;
      throw IntegrationBlowupError(os.str(), t);
    }
    out.times[i + 1] = (i + 1 == m - 1) ? t1 : t0 + (i + 1) * h;
    out.states.row(i + 1) = y.transpose();
  }
  return out;
}

void ShootingProblem::validate() const {
  if (dimension <= 0) throw ParameterError("shooting: dimension must be positive");
  if (!field || !interval || !residual) throw ParameterError("shooting: missing callables");
  if (unknown_guess.size() != unknown_initial.size()) {
    throw ParameterError("shooting: one guess per unknown initial component required");
  }
  std::vector<int> seen(static_cast<std::size_t>(dimension), 0);
  for (const auto& [index, value] : known_initial) {
    if (index < 0 || index >= dimension) throw ParameterError("shooting: index out of range");
    ++seen[static_cast<std::size_t>(index)];
  }
  for (int index : unknown_initial) {
    if (index < 0 || index >= dimension) throw ParameterError("shooting: index out of range");
    ++seen[static_cast<std::size_t>(index)];
  }
  for (int count : seen) {
    if (count != 1) {
      throw ParameterError("shooting: every component must be either known or unknown, once");
    }
  }
  if (residual_count != unknown_count()) {
    std::ostringstream os;
    os << "shooting: " << residual_count << " residuals for " << unknown_count() << " unknowns";
    throw ParameterError(os.str());
  }
  if (time_residual_index >= residual_count ||
      (alternate_time_residual_index && *alternate_time_residual_index >= residual_count)) {
    throw ParameterError("shooting: time residual index out of range");
  }
  if (free_time && !(free_time->lower < free_time->upper)) {
    throw BracketError("shooting: degenerate free-time bracket");
  }
}

namespace {

double horizon_of(const ShootingProblem& problem, const Vector& z) {
  return problem.free_time ? z[z.size() - 1] : problem.horizon;
}

Vector initial_state(const ShootingProblem& problem, const Vector& z) {
  Vector y0 = Vector::Zero(problem.dimension);
  for (const auto& [index, value] : problem.known_initial) y0[index] = value;
  for (std::size_t k = 0; k < problem.unknown_initial.size(); ++k) {
    y0[problem.unknown_initial[k]] = z[static_cast<Eigen::Index>(k)];
  }
  return y0;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

int time_index(const ShootingProblem& problem) {
  return problem.time_residual_index < 0 ? problem.residual_count - 1
                                         : problem.time_residual_index;
}

ShootingProblem fixed_time_subproblem(const ShootingProblem& problem, double T) {
  ShootingProblem sub = problem;
  sub.free_time.reset();
  sub.horizon = T;
  sub.residual_count = problem.residual_count - 1;
  sub.time_residual_index = -1;
  auto full = problem.residual;
  const int skip = time_index(problem);
  sub.residual = [full, skip](double t_end, const Vector& y, double horizon) {
    const Vector r = full(t_end, y, horizon);
    Vector out(r.size() - 1);
    for (Eigen::Index i = 0, k = 0; i < r.size(); ++i) {
      if (i != skip) out[k++] = r[i];
    }
    return out;
  };
  return sub;
}

struct NewtonOutcome {
  Vector z;
  Vector r;
  bool converged = false;
  int iterations = 0;
  std::string message;
};

NewtonOutcome newton(const ShootingProblem& problem, Vector z, const SolverConfig& config) {
  const auto evaluate = [&](const Vector& point) {
    return shooting_residual(problem, point, config.nodes);
  };
  const auto clamp_time = [&](Vector& point) {
    if (problem.free_time) {
      double& T = point[point.size() - 1];
      T = std::clamp(T, problem.free_time->lower, problem.free_time->upper);
    }
  };

  NewtonOutcome out;
  Vector r = evaluate(z);
  const Eigen::Index k = z.size();
  for (int iter = 0;; ++iter) {
    out.iterations = iter;
    const double norm = inf_norm(r);
    if (norm <= config.tolerance) {
      out.converged = true;
      break;
    }
    if (iter >= config.max_iterations) {
      out.message = "iteration cap reached";
      break;
    }

    Eigen::MatrixXd J(r.size(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
      double step = config.jacobian_step * (1.0 + std::abs(z[j]));
      if (problem.free_time && j == k - 1 && z[j] + step > problem.free_time->upper) step = -step;
      Vector probe = z;
      probe[j] += step;
      J.col(j) = (evaluate(probe) - r) / step;
    }

    Vector scale = J.cwiseAbs().colwise().maxCoeff().transpose();
    if ((scale.array() == 0.0).any() || !J.allFinite()) {
      throw SingularJacobianError("shooting Jacobian has a zero or non-finite column",
                                  std::numeric_limits<double>::infinity());
    }
    const Eigen::MatrixXd scaled = J * scale.cwiseInverse().asDiagonal();
    // Condition of the row- and column-equilibrated matrix.
    Vector row_scale = scaled.cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index i = 0; i < row_scale.size(); ++i) {
      if (row_scale[i] == 0.0) row_scale[i] = 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(row_scale.cwiseInverse().asDiagonal() * scaled);
    const auto& sv = svd.singularValues();
    const double condition = sv[sv.size() - 1] > 0.0
                                 ? sv[0] / sv[sv.size() - 1]
                                 : std::numeric_limits<double>::infinity();
    if (condition > config.max_condition) {
      std::ostringstream os;
      os << "shooting Jacobian is singular (condition estimate " << condition << ")";
      throw SingularJacobianError(os.str(), condition);
    }
    const Vector delta = scale.cwiseInverse().cwiseProduct(scaled.colPivHouseholderQr().solve(r));

    bool accepted = false;
    for (double lambda = 1.0; lambda >= config.min_step; lambda *= 0.5) {
      Vector trial = z - lambda * delta;
      clamp_time(trial);
      Vector r_trial;
      try {
        r_trial = evaluate(trial);
      } catch (const IntegrationBlowupError&) {
        continue;
      }
      if (r_trial.allFinite() && inf_norm(r_trial) < norm) {
        z = std::move(trial);
        r = std::move(r_trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.iterations = iter + 1;
      out.message = "line search could not reduce the residual";
      break;
    }
  }
  out.z = std::move(z);
  out.r = std::move(r);
  return out;
}

// Solves the fixed-time subproblem at T and returns the time residual there.
std::pair<double, NewtonOutcome> time_residual(const ShootingProblem& problem, double T,
                                               const Vector& guess, const SolverConfig& config) {
  const ShootingProblem sub = fixed_time_subproblem(problem, T);
  NewtonOutcome inner = newton(sub, guess, config);
  Vector full(guess.size() + 1);
  full << inner.z, T;
  const Vector r = shooting_residual(problem, full, config.nodes);
  return {r[time_index(problem)], std::move(inner)};
}

// Empty when the time residual changes sign across the bracket.
std::string bracket_failure(const ShootingProblem& problem, const Vector& inner_guess,
                            const SolverConfig& config) {
  const FreeTime& ft = *problem.free_time;
  try {
    const auto [r_lo, inner_lo] = time_residual(problem, ft.lower, inner_guess, config);
    const auto [r_hi, inner_hi] = time_residual(problem, ft.upper, inner_guess, config);
    // Only the sign matters here, so a stalled inner solve near the noise
    // floor is good enough.
    const double loose = std::sqrt(config.tolerance);
    if (inf_norm(inner_lo.r) > loose || inf_norm(inner_hi.r) > loose) {
      return "fixed-time solves at the bracket ends did not converge";
    }
    // An end whose residual is already within tolerance counts as a root.
    const bool end_root = std::abs(r_lo) <= config.tolerance || std::abs(r_hi) <= config.tolerance;
    if (!end_root && r_lo * r_hi > 0.0) {
      std::ostringstream os;
      os << "time residual has no sign change on [" << ft.lower << ", " << ft.upper << "] ("
         << r_lo << ", " << r_hi << ")";
      return os.str();
    }
  } catch (const SingularJacobianError& e) {
    return std::string("fixed-time solve at a bracket end failed: ") + e.what();
  }
  return {};
}

}  // namespace

Vector shooting_residual(const ShootingProblem& problem, const Vector& unknowns, int nodes,
                         Trajectory* trajectory) {
  const double T = horizon_of(problem, unknowns);
  const auto [t0, t1] = problem.interval(T);
  const Field field = [&](double t, const Vector& y) { return problem.field(t, y, T); };
  Vector y0 = initial_state(problem, unknowns);
  if (problem.initial_adjust) problem.initial_adjust(T, y0);
  Trajectory path = integrate_rk4(field, t0, t1, y0, nodes);
  Vector r = problem.residual(path.times[path.size() - 1], path.final_state(), T);
  if (trajectory) *trajectory = std::move(path);
  return r;
}

Solution solve_shooting(const ShootingProblem& problem, const SolverConfig& config) {
  problem.validate();
  if (config.nodes < 2 || config.tolerance <= 0.0 || config.max_iterations < 0) {
    throw ParameterError("solver config: need nodes >= 2, tolerance > 0");
  }

  Vector z(problem.unknown_count());
  for (std::size_t k = 0; k < problem.unknown_guess.size(); ++k) {
    z[static_cast<Eigen::Index>(k)] = problem.unknown_guess[k];
  }

  ShootingProblem chosen;
  const ShootingProblem* active = &problem;
  if (problem.free_time) {
    const FreeTime& ft = *problem.free_time;
    z[z.size() - 1] = ft.guess.value_or(0.5 * (ft.lower + ft.upper));
    if (config.check_bracket) {
      const Vector inner_guess = z.head(z.size() - 1);
      std::string failure = bracket_failure(problem, inner_guess, config);
      if (!failure.empty() && problem.alternate_time_residual_index) {
        chosen = problem;
        chosen.time_residual_index = *problem.alternate_time_residual_index;
        if (bracket_failure(chosen, inner_guess, config).empty()) {
          active = &chosen;
          failure.clear();
        }
      }
      if (!failure.empty()) throw BracketError(failure);
    }
  }

  NewtonOutcome outcome = newton(problem, z, config);
  int total_iterations = outcome.iterations;

  if (problem.free_time && !outcome.converged && config.check_bracket) {
    // Fall back to a bracketed secant (Illinois) search on T over fixed-time solves.
    const FreeTime& ft = *problem.free_time;
    Vector inner_guess = outcome.z.head(outcome.z.size() - 1);
    double lo = ft.lower;
    double hi = ft.upper;
    auto [f_lo, inner_lo] = time_residual(*active, lo, inner_guess, config);
    auto [f_hi, inner_hi] = time_residual(*active, hi, inner_guess, config);
    int side = 0;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
      double T = (f_hi - f_lo) != 0.0 ? hi - f_hi * (hi - lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
      if (!(T > std::min(lo, hi) && T < std::max(lo, hi))) T = 0.5 * (lo + hi);
      auto [f_mid, inner_mid] = time_residual(*active, T, inner_lo.z, config);
      ++total_iterations;
      Vector candidate(outcome.z.size());
      candidate << inner_mid.z, T;
      const Vector r = shooting_residual(problem, candidate, config.nodes);
      if (inf_norm(r) < inf_norm(outcome.r)) {
        outcome.z = candidate;
        outcome.r = r;
      }
      if (inf_norm(r) <= config.tolerance) {
        outcome.converged = true;
        outcome.message.clear();
        break;
      }
      if (f_mid * f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        hi = T;
        f_hi = f_mid;
        if (side == -1) f_lo *= 0.5;
        side = -1;
      } else {
        hi = T;
        f_hi = f_mid;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      }
    }
  }

  Solution solution;
  solution.converged = outcome.converged;
  solution.iterations = total_iterations;
  solution.unknowns = outcome.z;
  solution.message = outcome.message;
  solution.residual_norm = inf_norm(shooting_residual(problem, outcome.z, config.nodes,
                                                      &solution.trajectory));
  if (problem.free_time) solution.horizon = outcome.z[outcome.z.size() - 1];
  return solution;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::vector<std::string>& names,
                          const std::string& path) {
  std::vector<std::string> header{"t"};
  for (int j = 0; j < trajectory.dimension(); ++j) {
    header.push_back(j < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(j)]
                                                        : "y" + std::to_string(j));
  }
  csv::Table table(header);
  for (int i = 0; i < trajectory.size(); ++i) {
    std::vector<double> row{trajectory.times[i]};
    for (int j = 0; j < trajectory.dimension(); ++j) row.push_back(trajectory.states(i, j));
    table.add_row(row);
  }
  csv::write_file_atomic(path, table.str());
}

}  // namespace fracopt
