#include "fracpoisson/table.hpp"

#include <cstdio>

#include "fracpoisson/errors.hpp"

namespace fracpoisson::table {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Cell::Cell(double v) : text(format_double(v)), numeric(true) {}
Cell::Cell(std::int64_t v) : text(std::to_string(v)), numeric(true) {}
Cell::Cell(std::size_t v) : text(std::to_string(v)), numeric(true) {}

void Table::add_meta(const std::string& key, const Cell& value) {
  meta_.emplace_back(key, value);
}

void Table::set_columns(std::vector<std::string> columns) {
  columns_ = std::move(columns);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw ContractError("Table: row width does not match the header");
  }
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
  for (const auto& [key, value] : meta_) {
    os << "# " << key << "=" << value.text << "\n";
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? "," : "") << columns_[i];
  }
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << row[i].text;
    }
    os << "\n";
  }
}

namespace {

void write_json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      default: os << c;
    }
  }
  os << '"';
}

void write_json_cell(std::ostream& os, const Cell& cell) {
  if (cell.numeric) {
    // JSON has no literals for non-finite numbers.
    if (cell.text == "inf") {
      os << "\"inf\"";
    } else if (cell.text == "-inf") {
      os << "\"-inf\"";
    } else if (cell.text == "nan" || cell.text == "-nan") {
      os << "\"nan\"";
    } else {
      os << cell.text;
    }
  } else {
    write_json_string(os, cell.text);
  }
}

}  // namespace

void Table::write_json(std::ostream& os) const {
  os << "{\"meta\":{";
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (i) os << ",";
    write_json_string(os, meta_[i].first);
    os << ":";
    write_json_cell(os, meta_[i].second);
  }
  os << "},\"columns\":[";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) os << ",";
    write_json_string(os, columns_[i]);
  }
  os << "],\"rows\":[";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (r) os << ",";
    os << "[";
    for (std::size_t i = 0; i < rows_[r].size(); ++i) {
      if (i) os << ",";
      write_json_cell(os, rows_[r][i]);
    }
    os << "]";
  }
  os << "]}\n";
}

void Table::write(std::ostream& os, const std::string& format) const {
  if (format == "csv") {
    write_csv(os);
  } else if (format == "json") {
    write_json(os);
  } else {
    throw DomainError("Table: unknown format '" + format + "'");
  }
}

}  // namespace fracpoisson::table
