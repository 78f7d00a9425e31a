#pragma once

#include <string>
#include <vector>

#include "lanehouse/csv.hpp"
#include "lanehouse/schema.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

bool is_truthy(const std::string& cell, const std::vector<std::string>& truthy);

// Strict numeric parse of a raw cell; throws on garbage or trailing junk.
double parse_numeric_cell(const std::string& cell, const std::string& context);

// Number of amenity columns with a truthy cell.
int compute_total_ssvalue(const RawRecord& record, const std::vector<std::string>& amenity_columns,
                          const std::vector<std::string>& truthy);

// Maps a count into its bin's rank; throws when outside all bins.
int rank_ordinal(double count, const std::vector<RankBin>& bins);

// Indicator vector with a single 1 at the category's index.
Vector one_hot_encode(const std::string& value, const std::vector<std::string>& categories);

// Expanded column names in deterministic encoding order.
std::vector<std::string> expanded_feature_names(const FeatureSchema& schema);

// Encodes a cleaned table into the numeric design matrix per the schema.
DesignMatrix build_design_matrix(const RawTable& table, const FeatureSchema& schema);

}  // namespace lanehouse
