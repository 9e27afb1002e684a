#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "flightrl/types.hpp"

namespace flightrl::io {

// Line-buffered CSV writing with a fixed column schema; numeric cells are
// written with enough digits to round-trip a double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);       // arity-checked
  void raw_row(const std::vector<std::string>& cells);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

std::string format_cell(double value);

}  // namespace flightrl::io
