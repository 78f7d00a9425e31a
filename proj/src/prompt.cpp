#include "lanehouse/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lanehouse/encode.hpp"

namespace lanehouse {

StatsBlock compute_statistics(const Eigen::Ref<const Vector>& train_y) {
  if (train_y.size() < 1) throw std::invalid_argument("empty training set");
  std::vector<double> sorted(train_y.begin(), train_y.end());
  std::sort(sorted.begin(), sorted.end());
  StatsBlock s;
  s.min_price = sorted.front();
  s.max_price = sorted.back();
  s.median_price = sorted[(sorted.size() - 1) / 2];  // lower-middle for even n
  return s;
}

namespace {

const FeatureEntry* find_entry(const FeatureSchema& schema, const std::string& name) {
  for (const auto& e : schema.entries)
    if (e.name == name) return &e;
  return nullptr;
}

// The geographic field: the entry named "district" when present,
// otherwise the first categorical entry.
const FeatureEntry* district_entry(const FeatureSchema& schema) {
  if (const auto* e = find_entry(schema, "district"); e && e->kind == FeatureKind::categorical)
    return e;
  for (const auto& e : schema.entries)
    if (e.kind == FeatureKind::categorical) return &e;
  return nullptr;
}

double derived_value(const RawRecord& record, const FeatureEntry& entry, const FeatureSchema& schema) {
  if (entry.kind == FeatureKind::ordinal && !entry.amenity_columns.empty())
    return compute_total_ssvalue(record, entry.amenity_columns, schema.truthy);
  return parse_numeric_cell(record.at(entry.name), "field " + entry.name);
}

std::string field_or(const RawRecord& record, const std::string& key, const char* fallback) {
  auto it = record.find(key);
  return it == record.end() || it->second.empty() ? fallback : it->second;
}

}  // namespace

ShotSet select_shots(const RawRecord& query, const std::vector<RawRecord>& train_records,
                     const Eigen::Ref<const Vector>& train_rents, const FeatureSchema& schema,
                     int k, const std::map<std::string, double>* weights) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  if (static_cast<Eigen::Index>(train_records.size()) != train_rents.size())
    throw std::invalid_argument("train records and rents disagree in length");

  const auto* geo = district_entry(schema);

  // Per-field train ranges for the numeric contributions.
  std::map<std::string, std::pair<double, double>> ranges;
  for (const auto& e : schema.entries) {
    if (e.kind != FeatureKind::numeric && e.kind != FeatureKind::ordinal) continue;
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& r : train_records) {
      double v = derived_value(r, e, schema);
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    ranges[e.name] = {lo, hi};
  }

  auto weight_of = [&](const std::string& name) {
    if (!weights) return 1.0;
    auto it = weights->find(name);
    return it == weights->end() ? 1.0 : it->second;
  };

  auto distance_to = [&](const RawRecord& candidate) {
    double total = 0, weight_sum = 0;
    for (const auto& e : schema.entries) {
      double w = weight_of(e.name);
      if (w == 0) continue;
      double d = 0;
      switch (e.kind) {
        case FeatureKind::categorical:
          d = query.at(e.name) == candidate.at(e.name) ? 0.0 : 1.0;
          break;
        case FeatureKind::boolean:
          d = is_truthy(query.at(e.name), schema.truthy) ==
                      is_truthy(candidate.at(e.name), schema.truthy)
                  ? 0.0
                  : 1.0;
          break;
        case FeatureKind::numeric:
        case FeatureKind::ordinal: {
          double a = derived_value(query, e, schema);
          double b = derived_value(candidate, e, schema);
          auto [lo, hi] = ranges.at(e.name);
          double range = hi - lo;
          d = range > 0 ? std::abs(a - b) / range : (a == b ? 0.0 : 1.0);
          break;
        }
      }
      total += w * d;
      weight_sum += w;
    }
    return weight_sum > 0 ? total / weight_sum : 0.0;
  };

  struct Ranked {
    bool other_district;
    double distance;
    int index;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(train_records.size());
  const std::string query_district = geo ? query.at(geo->name) : std::string();
  for (std::size_t i = 0; i < train_records.size(); ++i) {
    bool other = geo ? train_records[i].at(geo->name) != query_district : false;
    ranked.push_back({other, distance_to(train_records[i]), static_cast<int>(i)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.other_district != b.other_district) return !a.other_district;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
  });

  ShotSet shots;
  shots.k = k;
  shots.truncated = k > static_cast<int>(train_records.size());
  const int take = std::min<int>(k, static_cast<int>(train_records.size()));
  for (int i = 0; i < take; ++i) {
    const auto& r = ranked[static_cast<std::size_t>(i)];
    shots.exemplars.push_back({train_records[static_cast<std::size_t>(r.index)],
                               train_rents(r.index), r.distance});
  }
  return shots;
}

std::string format_prompt_number(double v) {
  char buf[64];
  if (std::abs(v - std::llround(v)) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  }
  return buf;
}

std::string make_features_summary(const RawRecord& record, const FeatureSchema& schema) {
  std::string bedrooms = field_or(record, "bedrooms", "0");
  std::string living = field_or(record, "living-dining", "0");
  std::string bathrooms = field_or(record, "bathrooms", "0");

  std::vector<std::string> amenities;
  for (const auto& e : schema.entries) {
    for (const auto& col : e.amenity_columns) {
      auto it = record.find(col);
      if (it != record.end() && is_truthy(it->second, schema.truthy)) amenities.push_back(col);
    }
  }
  std::string list;
  for (std::size_t i = 0; i < amenities.size(); ++i) {
    if (i) list += ", ";
    list += amenities[i];
  }
  if (list.empty()) list = "no additional amenities";
  return bedrooms + " bedrooms, " + living + " living rooms, " + bathrooms +
         " bathrooms, and features such as " + list;
}

const std::vector<std::string>& prompt_template_ids() {
  static const std::vector<std::string> ids = {"tableii", "tableii_sqft", "narrative", "compact"};
  return ids;
}

namespace {

constexpr double kSqftPerSqm = 10.7639;

std::string describe(const std::string& tid, const std::string& location,
                     const std::string& house_type, double area, const std::string& features) {
  if (tid == "tableii") {
    return "The house is located in " + location + ".\nThe property is a " + house_type +
           ", with an area of " + format_prompt_number(area) +
           " square meters.\nIt includes " + features + ".";
  }
  if (tid == "tableii_sqft") {
    return "The house is located in " + location + ".\nThe property is a " + house_type +
           ", with an area of " + format_prompt_number(area * kSqftPerSqm) +
           " square feet.\nIt includes " + features + ".";
  }
  if (tid == "narrative") {
    return "This " + house_type + " sits in " + location + " and covers " +
           format_prompt_number(area) + " square meters.\nThe home offers " + features + ".";
  }
  if (tid == "compact") {
    return "Location: " + location + "\nType: " + house_type + "\nArea: " +
           format_prompt_number(area) + " sqm\nFeatures: " + features;
  }
  throw std::invalid_argument("unknown template: " + tid);
}

std::string statistics_sentence(const std::string& tid, const StatsBlock& s) {
  std::string trend_word = s.trend == Trend::upward ? "upward" : "downward";
  if (tid == "compact") {
    std::string line = "Stats: min " + format_prompt_number(s.min_price) + ", max " +
                       format_prompt_number(s.max_price) + ", median " +
                       format_prompt_number(s.median_price);
    if (s.trend != Trend::unspecified) line += ", trend " + trend_word;
    return line;
  }
  std::string line = "The training data includes houses with prices ranging from " +
                     format_prompt_number(s.min_price) + " to " +
                     format_prompt_number(s.max_price) + ", with a median price of " +
                     format_prompt_number(s.median_price) + ".";
  if (s.trend != Trend::unspecified) line += " The market trend is " + trend_word + ".";
  return line;
}

}  // namespace

std::string build_prompt(const PromptSpec& spec) {
  const std::string& tid = spec.template_id;
  if (std::find(prompt_template_ids().begin(), prompt_template_ids().end(), tid) ==
      prompt_template_ids().end())
    throw std::invalid_argument("unknown template: " + tid);
  if (spec.location.empty() || spec.house_type.empty() || spec.instruction.empty())
    throw std::invalid_argument("prompt spec missing required field");

  std::string out;
  int example_no = 1;
  for (const auto& ex : spec.shots.exemplars) {
    // Exemplar fields come from the raw record; rent is the answer line.
    std::string location = field_or(ex.record, "district", "unknown");
    std::string area_text = field_or(ex.record, "sqmeters", "0");
    double area = std::strtod(area_text.c_str(), nullptr);
    std::string features = field_or(ex.record, "__features_summary", "");
    out += "Example " + std::to_string(example_no++) + ":\n";
    out += describe(tid, location, spec.house_type, area, features);
    out += "\nActual rent: " + format_prompt_number(ex.rent) + " RMB per month.\n\n";
  }

  out += describe(tid, spec.location, spec.house_type, spec.area, spec.features_summary);
  out += "\n" + spec.instruction;
  out += "\n" + statistics_sentence(tid, spec.statistics);
  out += "\n";
  return out;
}

PromptSpec make_prompt_spec(const RawRecord& query, const ShotSet& shots, const StatsBlock& stats,
                            const FeatureSchema& schema, const std::string& template_id) {
  PromptSpec spec;
  const auto* geo = district_entry(schema);
  spec.location = geo ? query.at(geo->name) : "unknown";
  spec.house_type = "lane house";
  spec.area = std::strtod(field_or(query, "sqmeters", "0").c_str(), nullptr);
  spec.features_summary = make_features_summary(query, schema);
  spec.statistics = stats;
  spec.shots = shots;
  spec.template_id = template_id;
  // Precompute each exemplar's feature summary for rendering.
  for (auto& ex : spec.shots.exemplars)
    ex.record["__features_summary"] = make_features_summary(ex.record, schema);
  return spec;
}

}  // namespace lanehouse
