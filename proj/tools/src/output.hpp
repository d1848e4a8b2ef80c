#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracopt::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output directory of one run. Files are written atomically and listed in
/// manifest.txt, which finish() writes last.
class RunOutput {
 public:
  RunOutput(std::string directory, std::string subcommand);

  void parameter(const std::string& key, const std::string& value);
  void note(const std::string& key, const std::string& value);
  /// Throws IoError on failure.
  void write(const std::string& name, const std::string& content);
  void finish();

  const std::string& directory() const { return directory_; }

 private:
  std::string directory_;
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> parameters_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

/// Default output directory: $FRACOPT_OUT_DIR, else "fracopt-out".
std::string default_output_directory();

}  // namespace fracopt::cli
