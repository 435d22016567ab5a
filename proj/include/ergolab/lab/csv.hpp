#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/error.hpp"

namespace ergolab::lab {

/// Shortest round-trip text for a double ("%.17g").
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_bool(bool v) { return v ? "true" : "false"; }

/// A header plus rows of plain fields. Fields never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t column(std::string_view name) const noexcept {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    return npos;
  }

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw ConfigError("CSV row width does not match header");
    rows.push_back(std::move(row));
  }
};

inline void write_csv(const CsvTable& t, std::ostream& out) {
  const auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parses a table written by write_csv. Every row must match the header width; blank lines
/// are rejected. Errors carry the 1-based line number.
inline CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find('"') != std::string::npos) throw ParseError("quoted fields are not supported", number);
    if (number == 1) {
      if (line.empty()) throw ParseError("missing CSV header", number);
      t.header = split_csv_line(line);
      continue;
    }
    if (line.empty()) throw ParseError("blank CSV line", number);
    auto fields = split_csv_line(line);
    if (fields.size() != t.header.size()) {
      std::ostringstream msg;
      msg << "expected " << t.header.size() << " fields, found " << fields.size();
      throw ParseError(msg.str(), number);
    }
    t.rows.push_back(std::move(fields));
  }
  if (number == 0) throw ParseError("empty CSV input", 0);
  return t;
}

}  // namespace ergolab::lab
