#include "lanehouse/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace lanehouse {

int RawTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < column_order.size(); ++i)
    if (column_order[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& RawTable::cell(std::size_t row, const std::string& column) const {
  int c = column_index(column);
  if (c < 0) throw std::invalid_argument("unknown column: " + column);
  return rows.at(row)[static_cast<std::size_t>(c)];
}

RawRecord RawTable::record(std::size_t row) const {
  RawRecord out;
  const auto& r = rows.at(row);
  for (std::size_t i = 0; i < column_order.size(); ++i) out[column_order[i]] = r[i];
  return out;
}

namespace {

// Splits CSV text into records of fields per RFC 4180.
std::vector<std::vector<std::string>> parse_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any_char = false;

  auto end_field = [&] {
    fields.push_back(field);
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(fields);
    fields.clear();
    any_char = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        any_char = true;
        break;
      case ',':
        end_field();
        any_char = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any_char || !field.empty() || !fields.empty()) end_record();
        break;
      default:
        field += c;
        any_char = true;
        break;
    }
  }
  if (in_quotes) throw std::runtime_error("unterminated quoted field");
  if (any_char || !field.empty() || !fields.empty()) end_record();
  return records;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

RawTable parse_csv(const std::string& text) {
  auto records = parse_records(text);
  if (records.empty()) throw std::runtime_error("no header");
  RawTable table;
  table.column_order = records[0];
  table.rows.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.column_order.size())
      throw std::runtime_error("ragged row " + std::to_string(i) + ": expected " +
                               std::to_string(table.column_order.size()) + " fields, got " +
                               std::to_string(records[i].size()));
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

RawTable load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_csv(const RawTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t i = 0; i < table.column_order.size(); ++i) {
    if (i) out << ',';
    out << quote(table.column_order[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << quote(row[i]);
    }
    out << '\n';
  }
}

RawTable drop_missing(const RawTable& table, const std::vector<std::string>& required) {
  std::vector<int> cols;
  cols.reserve(required.size());
  for (const auto& name : required) {
    int c = table.column_index(name);
    if (c < 0) throw std::invalid_argument("unknown column: " + name);
    cols.push_back(c);
  }
  RawTable out;
  out.column_order = table.column_order;
  for (const auto& row : table.rows) {
    bool complete = true;
    for (int c : cols) {
      if (row[static_cast<std::size_t>(c)].empty()) {
        complete = false;
        break;
      }
    }
    if (complete) out.rows.push_back(row);
  }
  return out;
}

RawTable dedup(const RawTable& table) {
  RawTable out;
  out.column_order = table.column_order;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    std::string key;
    for (const auto& cell : row) {
      key += cell;
      key += '\x1f';
    }
    if (seen.insert(std::move(key)).second) out.rows.push_back(row);
  }
  return out;
}

}  // namespace lanehouse
