#include "flightrl/io/csv.hpp"

#include <charconv>

namespace flightrl::io {

std::string format_cell(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  if (columns.empty()) throw UsageError("CsvWriter: no columns");
  raw_row(columns);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw UsageError("CsvWriter: expected " + std::to_string(columns_) + " cells, got " +
                     std::to_string(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw IoError("write failed on '" + path_ + "'");
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_cell(v));
  raw_row(cells);
}

}  // namespace flightrl::io
