#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pumptrack {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric CSV with a header row. Empty cells load as NaN.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;  // -1 if absent
};

CsvTable load_csv(const std::string& path);
CsvTable parse_csv(std::istream& is, const std::string& origin);

/// One value at 15 significant digits, the project-wide output precision.
std::string fmt15(double x);

}  // namespace pumptrack
