#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace lanehouse {

enum class FeatureKind { numeric, boolean, ordinal, categorical };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

// Half-open numeric interval [lo, hi) (or closed [lo, hi] when
// hi_inclusive) mapped to an integer rank.
struct RankBin {
  double lo = 0;
  double hi = 0;
  bool hi_inclusive = false;
  int rank = 0;
};

struct FeatureEntry {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<std::string> categories;       // categorical only
  std::vector<RankBin> bins;                 // ordinal only
  std::vector<std::string> amenity_columns;  // ordinal derived from an amenity count
};

// Ordered feature descriptors driving CSV-to-matrix encoding.
struct FeatureSchema {
  std::vector<FeatureEntry> entries;
  std::string target_name;
  std::vector<std::string> truthy = {"1", "yes", "true", "\xe6\x9c\x89"};

  // Raw CSV columns the pipeline reads: feature sources, amenity columns
  // and the target. Used as the drop_missing requirement set.
  std::vector<std::string> source_columns() const;

  void validate() const;

  static FeatureSchema from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static FeatureSchema load(const std::string& path);

  // Bundled default: 14-district one-hot, room-type scalars and the
  // 3-rank amenity-count ordinal.
  static FeatureSchema default_lane_house();
};

}  // namespace lanehouse
