#ifndef FRACPOISSON_TABLE_HPP
#define FRACPOISSON_TABLE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

// Deterministic tabular output. Numbers are rendered with 17 significant
// digits so every double round-trips exactly and identical runs produce
// byte-identical files.
//
// CSV layout: '#'-prefixed metadata lines (key=value), a header row, data
// rows. JSON layout mirrors it: {"meta": {...}, "columns": [...],
// "rows": [[...], ...]}.

namespace fracpoisson::table {

struct Cell {
  std::string text;
  bool numeric = true;

  Cell() = default;
  Cell(double v);                 // NOLINT: implicit by design
  Cell(std::int64_t v);           // NOLINT
  Cell(std::size_t v);            // NOLINT
  Cell(const char* s) : text(s), numeric(false) {}
  Cell(std::string s) : text(std::move(s)), numeric(false) {}
};

class Table {
 public:
  void add_meta(const std::string& key, const Cell& value);
  void set_columns(std::vector<std::string> columns);
  void add_row(std::vector<Cell> row);

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  /// Dispatches on format "csv" or "json"; anything else is a DomainError.
  void write(std::ostream& os, const std::string& format) const;

 private:
  std::vector<std::pair<std::string, Cell>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// %.17g rendering used for every numeric cell.
std::string format_double(double v);

}  // namespace fracpoisson::table

#endif  // FRACPOISSON_TABLE_HPP
