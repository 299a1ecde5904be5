#include "towernorm/tables.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "towernorm/util.hpp"

namespace towernorm {

void Table::set_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}
void Table::set_meta(const std::string& key, double value) {
  meta_.emplace_back(key, fmt_double(value));
}
void Table::set_meta(const std::string& key, std::int64_t value) {
  meta_.emplace_back(key, std::to_string(value));
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row width does not match the header");
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string cell_text(const Table::Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
  return std::to_string(std::get<std::int64_t>(c));
}

}  // namespace

std::string Table::csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta_) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? "," : "") << columns_[i];
  }
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_text(row[i]);
    }
    os << "\n";
  }
  return os.str();
}

std::string Table::json() const {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) meta[k] = v;
  doc["meta"] = std::move(meta);
  doc["columns"] = columns_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<std::string>(c)) {
        obj[columns_[i]] = std::get<std::string>(c);
      } else if (std::holds_alternative<double>(c)) {
        obj[columns_[i]] = std::get<double>(c);
      } else {
        obj[columns_[i]] = std::get<std::int64_t>(c);
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string Table::render(const std::string& format) const {
  if (format == "csv") return csv();
  if (format == "json") return json();
  throw std::invalid_argument("unknown format '" + format + "'");
}

}  // namespace towernorm
