#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lanehouse/csv.hpp"
#include "lanehouse/schema.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

enum class Trend { upward, downward, unspecified };

struct StatsBlock {
  double min_price = 0;
  double max_price = 0;
  double median_price = 0;
  Trend trend = Trend::unspecified;
};

// Order statistics of the training rents; median is the lower-middle
// element for even counts.
StatsBlock compute_statistics(const Eigen::Ref<const Vector>& train_y);

struct Exemplar {
  RawRecord record;
  double rent = 0;
  double distance = 0;
};

struct ShotSet {
  int k = 0;
  std::vector<Exemplar> exemplars;  // ascending distance
  bool truncated = false;           // k exceeded the training size
};

// Ranks training records by a Gower-style mixed-type distance with a
// hard preference for the query's district, then returns the first k.
ShotSet select_shots(const RawRecord& query, const std::vector<RawRecord>& train_records,
                     const Eigen::Ref<const Vector>& train_rents, const FeatureSchema& schema,
                     int k, const std::map<std::string, double>* weights = nullptr);

struct PromptSpec {
  std::string location;
  std::string house_type;
  double area = 0;  // square meters
  std::string features_summary;
  std::string instruction = "Predict the house price based on the above information.";
  StatsBlock statistics;
  ShotSet shots;
  std::string template_id = "tableii";
};

// Paraphrase library for the robustness study; "tableii" is the default.
const std::vector<std::string>& prompt_template_ids();

// Byte-deterministic rendering of the five prompt fields, preceded by one
// block per exemplar when shots are present.
std::string build_prompt(const PromptSpec& spec);

// "2 bedrooms, 1 living rooms, 1 bathrooms, and features such as ..." from
// a raw record, driven by the schema's amenity columns.
std::string make_features_summary(const RawRecord& record, const FeatureSchema& schema);

PromptSpec make_prompt_spec(const RawRecord& query, const ShotSet& shots, const StatsBlock& stats,
                            const FeatureSchema& schema, const std::string& template_id);

// Deterministic number rendering shared by all templates.
std::string format_prompt_number(double v);

}  // namespace lanehouse
