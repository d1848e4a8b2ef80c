#pragma once

#include <string>
#include <vector>

namespace fracopt::cli {

enum ExitCode { kSuccess = 0, kValidation = 2, kNotConverged = 3, kIo = 4 };

struct ApproxArgs {
  std::string fn = "t4";
  double alpha = 0.5;
  std::vector<int> n{2};
  std::vector<int> N{2, 4, 6};
  int grid = 101;
  double b = 1.0;
  bool caputo = false;
  std::string out;
};

struct ExampleArgs {
  double alpha = 0.5;
  std::vector<int> N{2, 3};
  std::string pipeline = "both";
  int grid = 1001;
  double epsilon = 1e-6;
  double tolerance = 1e-10;
  std::vector<double> bracket{1.0, 1.6};
  std::string out;
};

int cmd_approx(const ApproxArgs& args);
int cmd_example1(const ExampleArgs& args);
int cmd_example2(const ExampleArgs& args);
int cmd_solve(const std::string& config_path, const std::string& out);

}  // namespace fracopt::cli
