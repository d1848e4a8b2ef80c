#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracopt {

using Vector = Eigen::VectorXd;

/// Right-hand side of y' = F(t, y).
using Field = std::function<Vector(double t, const Vector& y)>;

/// Samples on a uniform grid: row i of `states` is y(times[i]).
struct Trajectory {
  Vector times;
  Eigen::MatrixXd states;

  int size() const { return static_cast<int>(times.size()); }
  int dimension() const { return static_cast<int>(states.cols()); }
  Vector final_state() const { return states.row(states.rows() - 1).transpose(); }
};

/// One classical fourth-order Runge-Kutta step of size h from (t, y).
Vector rk4_step(const Field& field, double t, const Vector& y, double h);

/// Fixed-step RK4 over m >= 2 uniform nodes from t0 to t1 (h = (t1 - t0) / (m - 1)).
/// Throws IntegrationBlowupError if the field or the state becomes non-finite.
Trajectory integrate_rk4(const Field& field, double t0, double t1, const Vector& y0, int m);

/// Free terminal time description: initial guess and admissible bracket.
struct FreeTime {
  double lower;
  double upper;
  std::optional<double> guess;  // defaults to the bracket midpoint
};

/// Single-shooting formulation of a two-point boundary value problem.
///
/// The integration interval may depend on the horizon T, e.g. [a + eps, T - eps]
/// for fields singular at both end points; with free time the solver
/// integrates over s in [0, 1] and maps t = t0(T) + s (t1(T) - t0(T)).
struct ShootingProblem {
  int dimension = 0;
  /// Field evaluated with the current horizon T.
  std::function<Vector(double t, const Vector& y, double T)> field;
  /// Integration interval for a horizon T.
  std::function<std::pair<double, double>(double T)> interval;
  /// Fixed horizon, used when free_time is empty.
  double horizon = 1.0;
  std::optional<FreeTime> free_time;

  /// Initial components with known values.
  std::vector<std::pair<int, double>> known_initial;
  /// Indices of unknown initial components, with initial guesses.
  std::vector<int> unknown_initial;
  std::vector<double> unknown_guess;
  /// Optional horizon-dependent adjustment of the assembled initial state.
  std::function<void(double T, Vector& y0)> initial_adjust;

  /// Terminal residual map (t_end, y(t_end), T) -> r. Its length must equal the
  /// number of unknowns (unknown initial components plus one if T is free).
  std::function<Vector(double t_end, const Vector& y_end, double T)> residual;
  int residual_count = 0;
  /// Residual component used as the time residual of free-time problems in
  /// the bracket check and the bracketed fallback; -1 selects the last one.
  /// The remaining components are solved at fixed T.
  int time_residual_index = -1;
  /// Tried in place of time_residual_index when that one shows no sign
  /// change or its fixed-time solves fail.
  std::optional<int> alternate_time_residual_index;

  std::vector<std::string> channel_names;

  int unknown_count() const {
    return static_cast<int>(unknown_initial.size()) + (free_time ? 1 : 0);
  }
  /// Throws ParameterError if the bookkeeping is inconsistent.
  void validate() const;
};

struct SolverConfig {
  int nodes = 1001;
  double tolerance = 1e-10;
  int max_iterations = 50;
  /// Forward-difference step is jacobian_step * (1 + |z_j|).
  double jacobian_step = 1e-7;
  /// Line search halves the Newton step down to this fraction.
  double min_step = 1.0 / (1 << 20);
  /// Row- and column-equilibrated condition number above which the Jacobian is singular.
  double max_condition = 1e14;
  /// Check that the free-time residual changes sign across the bracket.
  bool check_bracket = true;
};

struct Solution {
  Trajectory trajectory;
  bool converged = false;
  double residual_norm = 0.0;
  int iterations = 0;
  std::optional<double> horizon;  // T when free
  Vector unknowns;
  std::string message;
};

/// Damped Newton on z -> residual(z) with a forward-difference Jacobian.
///
/// Non-convergence is reported through Solution::converged, not an exception.
/// Throws SingularJacobianError when the equilibrated condition number exceeds
/// config.max_condition, and BracketError for a degenerate free-time bracket
/// or one without a sign change of the time residual.
Solution solve_shooting(const ShootingProblem& problem, const SolverConfig& config = {});

/// Integrates the problem once for given unknowns and returns the residual.
Vector shooting_residual(const ShootingProblem& problem, const Vector& unknowns, int nodes,
                         Trajectory* trajectory = nullptr);

/// Writes a trajectory as CSV: t followed by one column per channel.
void write_trajectory_csv(const Trajectory& trajectory, const std::vector<std::string>& names,
                          const std::string& path);

}  // namespace fracopt
