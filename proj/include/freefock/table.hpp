#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace freefock {

// One output cell. Integers and doubles are kept apart so CSV and JSON can
// format them the same way on every run.
using TableCell = std::variant<long long, double, std::string>;

// 12 significant digits, '.' decimal point, no locale dependence.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::string format_cell(const TableCell& c) {
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  return std::get<std::string>(c);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<TableCell>> rows;

  void add_row(std::vector<TableCell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row arity mismatch");
    rows.push_back(std::move(row));
  }
};

inline std::string write_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
    out << '\n';
  }
  return out.str();
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

// Array of row objects keyed by the CSV header names.
inline std::string write_json(const Table& t) {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << "  {";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      out << (c ? ", " : "") << '"' << json_escape(t.columns[c]) << "\": ";
      const TableCell& cell = t.rows[r][c];
      if (std::holds_alternative<std::string>(cell))
        out << '"' << json_escape(std::get<std::string>(cell)) << '"';
      else
        out << format_cell(cell);
    }
    out << (r + 1 < t.rows.size() ? "},\n" : "}\n");
  }
  out << "]\n";
  return out.str();
}

}  // namespace freefock
