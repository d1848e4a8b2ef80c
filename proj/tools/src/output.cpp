#include "output.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fracopt/csv.hpp"

namespace fracopt::cli {

RunOutput::RunOutput(std::string directory, std::string subcommand)
    : directory_(std::move(directory)),
      subcommand_(std::move(subcommand)),
      start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw IoError("cannot create output directory " + directory_ + ": " + ec.message());
}

void RunOutput::parameter(const std::string& key, const std::string& value) {
  parameters_.emplace_back(key, value);
}

void RunOutput::note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

void RunOutput::write(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::path(directory_) / name).string();
  try {
    csv::write_file_atomic(path, content);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  files_.push_back(name);
}

void RunOutput::finish() {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  std::ostringstream os;
  os << "subcommand: " << subcommand_ << '\n';
  os << "output_dir: " << directory_ << '\n';
  for (const auto& [k, v] : parameters_) os << "param " << k << " = " << v << '\n';
  for (const auto& [k, v] : notes_) os << "result " << k << " = " << v << '\n';
  os << "duration_seconds: " << csv::format_number(seconds) << '\n';
  for (const auto& f : files_) os << "file " << f << '\n';
  os << "file manifest.txt\n";
  const std::string path = (std::filesystem::path(directory_) / "manifest.txt").string();
  try {
    csv::write_file_atomic(path, os.str());
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

std::string default_output_directory() {
  const char* env = std::getenv("FRACOPT_OUT_DIR");
  return env && *env ? env : "fracopt-out";
}

}  // namespace fracopt::cli
