#pragma once

// Ordered tables written as CSV (17 significant digits, LF) or JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pointscatter::cli {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

inline std::string format_double(double x) {
  if (!std::isfinite(x))
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0)
    x = 0.0; // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Cell opt_cell(const std::optional<double> &x) {
  return x ? Cell{*x} : Cell{};
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string to_text(const Cell &c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string &s) const { return s; }
  } v;
  return std::visit(v, c);
}

inline std::string to_csv(const Table &t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + to_text(row[i]);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json_value(const Cell &c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    // Doubles go through the 17-digit text form so JSON and CSV agree.
    nlohmann::ordered_json operator()(double x) const {
      if (!std::isfinite(x))
        return format_double(x);
      return nlohmann::ordered_json::parse(format_double(x));
    }
    nlohmann::ordered_json operator()(long long x) const { return x; }
    nlohmann::ordered_json operator()(bool x) const { return x; }
    nlohmann::ordered_json operator()(const std::string &s) const { return s; }
  } v;
  return std::visit(v, c);
}

inline nlohmann::ordered_json to_json(const Table &t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto &row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      obj[t.columns[i]] = to_json_value(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

inline std::string dump_json(const nlohmann::ordered_json &j) { return j.dump(2) + "\n"; }

/// Writes text to a file (binary mode, so LF stays LF) or to stdout when the
/// path is empty.
inline void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw std::runtime_error("cannot open output file " + path);
  f << text;
}

} // namespace pointscatter::cli
