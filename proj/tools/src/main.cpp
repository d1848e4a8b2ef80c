#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "fracopt/errors.hpp"
#include "output.hpp"

using namespace fracopt;
using namespace fracopt::cli;

int main(int argc, char** argv) {
  CLI::App app{"Expansion-based approximation of fractional derivatives and fractional optimal control"};
  app.require_subcommand(1);

  ApproxArgs approx;
  auto* approx_cmd = app.add_subcommand("approx", "Compare expansion approximations with exact derivatives");
  approx_cmd->add_option("--fn", approx.fn, "t4, exp2t or poly:c0,c1,...")->capture_default_str();
  approx_cmd->add_option("--alpha", approx.alpha, "Fractional order")->capture_default_str();
  approx_cmd->add_option("--n", approx.n, "Expansion order(s), comma separated")->delimiter(',');
  approx_cmd->add_option("--N", approx.N, "Truncation(s), comma separated")->delimiter(',');
  approx_cmd->add_option("--grid", approx.grid, "Grid nodes on [0, b]")->capture_default_str();
  approx_cmd->add_option("--b", approx.b, "Right end of the interval")->capture_default_str();
  approx_cmd->add_flag("--caputo", approx.caputo, "Approximate the Caputo derivative instead");
  approx_cmd->add_option("--out", approx.out, "Output directory");

  ExampleArgs ex1;
  auto* ex1_cmd = app.add_subcommand("example1", "Fixed-horizon example with known solution");
  ExampleArgs ex2;
  ex2.N = {2};
  auto* ex2_cmd = app.add_subcommand("example2", "Free-horizon example, both pipelines");
  for (auto [cmd, args] : {std::pair{ex1_cmd, &ex1}, std::pair{ex2_cmd, &ex2}}) {
    cmd->add_option("--alpha", args->alpha, "Fractional order in (0, 1)")->capture_default_str();
    cmd->add_option("--N", args->N, "Expansion truncation(s)")->delimiter(',');
    cmd->add_option("--pipeline", args->pipeline,
                    "fractional-conditions, reduce-then-classical or both")
        ->capture_default_str();
    cmd->add_option("--grid", args->grid, "RK4 nodes")->capture_default_str();
    cmd->add_option("--epsilon", args->epsilon, "Relative shift off singular end points")
        ->capture_default_str();
    cmd->add_option("--tolerance", args->tolerance, "Newton tolerance")->capture_default_str();
    cmd->add_option("--out", args->out, "Output directory");
  }
  ex2_cmd->add_option("--bracket", ex2.bracket, "Terminal time bracket lo,hi")->delimiter(',');

  std::string config_path;
  std::string solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem described by a config file");
  solve_cmd->add_option("config", config_path, "Config file")->required();
  solve_cmd->add_option("--out", solve_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidation;
  }

  try {
    if (*approx_cmd) {
      if (approx.out.empty()) approx.out = default_output_directory();
      return cmd_approx(approx);
    }
    if (*ex1_cmd) {
      if (ex1.out.empty()) ex1.out = default_output_directory();
      return cmd_example1(ex1);
    }
    if (*ex2_cmd) {
      if (ex2.out.empty()) ex2.out = default_output_directory();
      return cmd_example2(ex2);
    }
    if (solve_out.empty()) solve_out = default_output_directory();
    return cmd_solve(config_path, solve_out);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const SingularJacobianError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kNotConverged;
  } catch (const IntegrationBlowupError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kNotConverged;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
}
