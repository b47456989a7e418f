#include "pumptrack/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace pumptrack {

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable parse_csv(std::istream& is, const std::string& origin) {
  CsvTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (table.columns.empty()) {
      for (const auto& c : cells) table.columns.push_back(trim(c));
      continue;
    }
    if (cells.size() != table.columns.size())
      throw parse_error(origin + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.columns.size()) + " fields, got " +
                        std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      const std::string v = trim(cell);
      if (v.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0')
        throw parse_error(origin + ":" + std::to_string(line_no) +
                          ": not a number: '" + v + "'");
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty())
    throw parse_error(origin + ": empty file");
  return table;
}

CsvTable load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open: " + path);
  return parse_csv(is, path);
}

std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

}  // namespace pumptrack
