#include "lanehouse/encode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lanehouse {

bool is_truthy(const std::string& cell, const std::vector<std::string>& truthy) {
  return std::find(truthy.begin(), truthy.end(), cell) != truthy.end();
}

double parse_numeric_cell(const std::string& cell, const std::string& context) {
  if (cell.empty()) throw std::invalid_argument("empty numeric cell at " + context);
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t')) ++end;
  if (end == begin || (end && *end != '\0'))
    throw std::invalid_argument("unparseable numeric cell '" + cell + "' at " + context);
  if (!std::isfinite(v))
    throw std::invalid_argument("non-finite numeric cell '" + cell + "' at " + context);
  return v;
}

int compute_total_ssvalue(const RawRecord& record, const std::vector<std::string>& amenity_columns,
                          const std::vector<std::string>& truthy) {
  int count = 0;
  for (const auto& col : amenity_columns) {
    auto it = record.find(col);
    if (it == record.end()) throw std::invalid_argument("unknown amenity column: " + col);
    if (is_truthy(it->second, truthy)) ++count;
  }
  return count;
}

int rank_ordinal(double count, const std::vector<RankBin>& bins) {
  for (const auto& b : bins) {
    if (count >= b.lo && (count < b.hi || (b.hi_inclusive && count == b.hi))) return b.rank;
  }
  throw std::out_of_range("value " + std::to_string(count) + " outside all ordinal bins");
}

Vector one_hot_encode(const std::string& value, const std::vector<std::string>& categories) {
  auto it = std::find(categories.begin(), categories.end(), value);
  if (it == categories.end()) throw std::invalid_argument("unseen category: " + value);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(categories.size()));
  v(it - categories.begin()) = 1.0;
  return v;
}

std::vector<std::string> expanded_feature_names(const FeatureSchema& schema) {
  std::vector<std::string> names;
  for (const auto& e : schema.entries) {
    if (e.kind == FeatureKind::categorical) {
      for (const auto& c : e.categories) names.push_back(e.name + "-" + c);
    } else {
      names.push_back(e.name);
    }
  }
  return names;
}

DesignMatrix build_design_matrix(const RawTable& table, const FeatureSchema& schema) {
  schema.validate();
  DesignMatrix d;
  d.feature_names = expanded_feature_names(schema);
  const auto n = static_cast<Eigen::Index>(table.n_rows());
  const auto p = static_cast<Eigen::Index>(d.feature_names.size());
  d.x.resize(n, p);
  d.y.resize(n);

  int target_col = table.column_index(schema.target_name);
  if (target_col < 0) throw std::invalid_argument("target column '" + schema.target_name + "' not in table");

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row_ctx = "row " + std::to_string(i);
    RawRecord rec = table.record(static_cast<std::size_t>(i));
    Eigen::Index col = 0;
    for (const auto& e : schema.entries) {
      switch (e.kind) {
        case FeatureKind::numeric:
          d.x(i, col++) = parse_numeric_cell(rec.at(e.name), row_ctx + ", column " + e.name);
          break;
        case FeatureKind::boolean:
          d.x(i, col++) = is_truthy(rec.at(e.name), schema.truthy) ? 1.0 : 0.0;
          break;
        case FeatureKind::ordinal: {
          double value = e.amenity_columns.empty()
                             ? parse_numeric_cell(rec.at(e.name), row_ctx + ", column " + e.name)
                             : compute_total_ssvalue(rec, e.amenity_columns, schema.truthy);
          d.x(i, col++) = rank_ordinal(value, e.bins);
          break;
        }
        case FeatureKind::categorical: {
          Vector oh = one_hot_encode(rec.at(e.name), e.categories);
          d.x.block(i, col, 1, oh.size()) = oh.transpose();
          col += oh.size();
          break;
        }
      }
    }
    d.y(i) = parse_numeric_cell(rec.at(schema.target_name), row_ctx + ", column " + schema.target_name);
  }

  if (!d.x.allFinite() || !d.y.allFinite())
    throw std::runtime_error("design matrix contains non-finite entries after expansion");
  return d;
}

}  // namespace lanehouse
