#pragma once

#include <string>
#include <vector>

namespace fracopt::csv {

/// Decimal text with 15 significant digits ("%.15g"); non-finite values print as "nan".
std::string format_number(double value);

/// Row-oriented CSV table with a header row.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  void add_text_row(const std::vector<std::string>& cells);

  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `content` to `path` through a temporary sibling file and a rename.
/// Throws std::runtime_error (wrapped as an I/O failure by callers) on error.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace fracopt::csv
