#pragma once

#include <map>
#include <string>
#include <vector>

namespace lanehouse {

// One row of raw text cells keyed by column name.
using RawRecord = std::map<std::string, std::string>;

// Pre-encoding dataset: text cells in header order.
struct RawTable {
  std::vector<std::string> column_order;
  std::vector<std::vector<std::string>> rows;  // each row aligned to column_order

  std::size_t n_rows() const { return rows.size(); }
  int column_index(const std::string& name) const;  // -1 when absent
  const std::string& cell(std::size_t row, const std::string& column) const;
  RawRecord record(std::size_t row) const;
};

// RFC 4180 CSV: quoted fields, doubled quotes, CRLF tolerated.
RawTable load_csv(const std::string& path);
RawTable parse_csv(const std::string& text);
void write_csv(const RawTable& table, const std::string& path);

// Keeps rows where every required cell is non-empty; order preserved.
RawTable drop_missing(const RawTable& table, const std::vector<std::string>& required);

// Removes rows whose full cell tuple duplicates an earlier row.
RawTable dedup(const RawTable& table);

}  // namespace lanehouse
