#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace gjms {

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double value);

/// Minimal CSV table: header plus rows of already formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  /// Convenience for all-numeric rows.
  void add_numeric_row(std::initializer_list<double> values);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace gjms
