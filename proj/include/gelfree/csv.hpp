#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "gelfree/errors.hpp"

// CSV and number formatting used by every artifact writer.  All floats go
// through std::to_chars: locale-independent by construction, and 17
// significant digits round-trip any double exactly.

namespace gelfree {

inline std::string format_double(double v, int significant_digits = 17) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, significant_digits);
  if (res.ec != std::errc())
    throw Error("failed to format floating-point value");
  return std::string(buf, res.ptr);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string render_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw Error("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed while writing " + path);
}

inline void write_csv(const std::string& path, const CsvTable& table) {
  write_text_file(path, render_csv(table));
}

}  // namespace gelfree
