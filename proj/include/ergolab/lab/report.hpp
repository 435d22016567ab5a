#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/lab/csv.hpp"
#include "ergolab/numerics/fit.hpp"

namespace ergolab::lab {

struct ReportSummary {
  std::size_t rows = 0;
  std::size_t violations = 0;
  std::vector<std::size_t> violating_rows;  // 0-based data row indices
  std::optional<numerics::FitResult> fit;
  std::string fit_x, fit_y;
  std::vector<std::string> notes;
};

namespace detail {

inline double parse_field(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("field \"" + s + "\" is not a number", line);
  }
}

}  // namespace detail

/// Counts holds=false rows and fits the natural power law of the table, if it has one:
/// (parameter, norm_total), (parameter, mean_l1) or (scale, abs).
inline ReportSummary summarize(const CsvTable& t) {
  ReportSummary s;
  s.rows = t.rows.size();
  if (const auto h = t.column("holds"); h != CsvTable::npos) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& v = t.rows[r][h];
      if (v == "false") {
        ++s.violations;
        s.violating_rows.push_back(r);
      } else if (v != "true") {
        throw ParseError("holds must be true or false, found \"" + v + "\"", r + 2);
      }
    }
  }
  for (const auto& [x, y] : {std::pair{"parameter", "norm_total"}, std::pair{"parameter", "mean_l1"},
                             std::pair{"scale", "abs"}}) {
    const auto cx = t.column(x), cy = t.column(y);
    if (cx == CsvTable::npos || cy == CsvTable::npos) continue;
    s.fit_x = x;
    s.fit_y = y;
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double a = detail::parse_field(t.rows[r][cx], r + 2);
      const double b = detail::parse_field(t.rows[r][cy], r + 2);
      if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
        xs.push_back(a);
        ys.push_back(b);
      }
    }
    if (xs.size() < t.rows.size()) s.notes.push_back("rows with nonpositive values left out of the fit");
    try {
      s.fit = numerics::fit_power_law(xs, ys);
      if (s.fit->r_squared < 0.9) s.notes.push_back("low r^2: the power law describes the data poorly");
    } catch (const DomainError& e) {
      s.notes.push_back(std::string("fit degenerate: ") + e.what());
    }
    break;
  }
  return s;
}

/// Prints the summary; returns 1 when any row violates, 0 otherwise.
inline int report(const CsvTable& t, std::ostream& out) {
  const ReportSummary s = summarize(t);
  out << s.rows << " rows\n";
  if (s.fit) {
    out.precision(6);
    out << "fit " << s.fit_y << " ~ " << s.fit_x << "^" << s.fit->exponent << " (r^2 = " << s.fit->r_squared
        << ", " << s.fit->points_used << " points)\n";
  }
  for (const auto& n : s.notes) out << "note: " << n << '\n';
  out << s.violations << " violations\n";
  for (std::size_t r : s.violating_rows) {
    out << "  violation at row " << r + 1 << " (line " << r + 2 << "):";
    for (std::size_t c = 0; c < t.header.size(); ++c) out << ' ' << t.header[c] << '=' << t.rows[r][c];
    out << '\n';
  }
  return s.violations == 0 ? 0 : 1;
}

inline int report_file(const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return report(parse_csv(in), out);
}

}  // namespace ergolab::lab
