#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace towernorm {

// Tabular results with a key=value preamble; renders to CSV (comment lines,
// header row, data rows) or an equivalent JSON document.  Cell formatting is
// byte-stable for identical inputs.
class Table {
 public:
  using Cell = std::variant<std::string, double, std::int64_t>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  void set_meta(const std::string& key, std::int64_t value);
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  std::string csv() const;
  std::string json() const;
  std::string render(const std::string& format) const;  // "csv" or "json"

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace towernorm
