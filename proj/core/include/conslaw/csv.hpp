#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace conslaw {

/// Shortest digit string that round-trips to exactly x; -0 collapses to "0".
std::string format_double(double x);

/// Minimal CSV emitter. The stream is opened in binary mode and all numbers
/// go through format_double, so equal runs produce byte-equal files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void numeric_row(std::span<const double> cells);

 private:
  void write_line(const std::vector<std::string>& cells);

  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace conslaw
