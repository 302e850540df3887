#include "conslaw/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace conslaw {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // merges -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  write_line(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: row width mismatch in " + path_);
  write_line(cells);
}

void CsvWriter::numeric_row(std::span<const double> cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double x : cells) text.push_back(format_double(x));
  row(text);
}

void CsvWriter::write_line(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_.put(',');
    out_ << cells[i];
  }
  out_.put('\n');
  if (!out_) throw std::runtime_error("CsvWriter: write failed on " + path_);
}

}  // namespace conslaw
