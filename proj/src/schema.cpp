#include "lanehouse/schema.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace lanehouse {

using nlohmann::json;

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::boolean: return "boolean";
    case FeatureKind::ordinal: return "ordinal";
    case FeatureKind::categorical: return "categorical";
  }
  throw std::logic_error("bad FeatureKind");
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::numeric;
  if (s == "boolean") return FeatureKind::boolean;
  if (s == "ordinal") return FeatureKind::ordinal;
  if (s == "categorical") return FeatureKind::categorical;
  throw std::invalid_argument("unknown feature kind: " + s);
}

std::vector<std::string> FeatureSchema::source_columns() const {
  std::vector<std::string> out;
  auto push_unique = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  for (const auto& e : entries) {
    if (e.kind == FeatureKind::ordinal && !e.amenity_columns.empty()) {
      for (const auto& c : e.amenity_columns) push_unique(c);
    } else {
      push_unique(e.name);
    }
  }
  push_unique(target_name);
  return out;
}

void FeatureSchema::validate() const {
  if (target_name.empty()) throw std::invalid_argument("schema: missing target");
  for (const auto& e : entries) {
    if (e.name == target_name)
      throw std::invalid_argument("schema: target '" + target_name + "' listed as a feature");
    if (e.kind == FeatureKind::categorical) {
      if (e.categories.empty())
        throw std::invalid_argument("schema: categorical '" + e.name + "' has no categories");
      std::set<std::string> uniq(e.categories.begin(), e.categories.end());
      if (uniq.size() != e.categories.size())
        throw std::invalid_argument("schema: duplicate categories in '" + e.name + "'");
    }
    if (e.kind == FeatureKind::ordinal) {
      if (e.bins.empty())
        throw std::invalid_argument("schema: ordinal '" + e.name + "' has no bins");
      auto bins = e.bins;
      std::sort(bins.begin(), bins.end(), [](const RankBin& a, const RankBin& b) { return a.lo < b.lo; });
      for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i].hi < bins[i].lo)
          throw std::invalid_argument("schema: inverted bin in '" + e.name + "'");
        if (i + 1 < bins.size() && bins[i].hi > bins[i + 1].lo)
          throw std::invalid_argument("schema: overlapping bins in '" + e.name + "'");
      }
    }
  }
}

FeatureSchema FeatureSchema::from_json(const json& j) {
  FeatureSchema s;
  s.target_name = j.at("target").get<std::string>();
  if (j.contains("truthy")) s.truthy = j.at("truthy").get<std::vector<std::string>>();
  for (const auto& fj : j.at("features")) {
    FeatureEntry e;
    e.name = fj.at("name").get<std::string>();
    e.kind = feature_kind_from_string(fj.at("kind").get<std::string>());
    if (fj.contains("categories")) e.categories = fj.at("categories").get<std::vector<std::string>>();
    if (fj.contains("bins")) {
      for (const auto& bj : fj.at("bins")) {
        RankBin b;
        b.lo = bj.at("lo").get<double>();
        b.hi = bj.at("hi").get<double>();
        b.rank = bj.at("rank").get<int>();
        b.hi_inclusive = bj.value("hi_inclusive", false);
        e.bins.push_back(b);
      }
    }
    if (fj.contains("amenity_columns"))
      e.amenity_columns = fj.at("amenity_columns").get<std::vector<std::string>>();
    s.entries.push_back(std::move(e));
  }
  s.validate();
  return s;
}

json FeatureSchema::to_json() const {
  json features = json::array();
  for (const auto& e : entries) {
    json fj;
    fj["name"] = e.name;
    fj["kind"] = to_string(e.kind);
    if (!e.categories.empty()) fj["categories"] = e.categories;
    if (!e.bins.empty()) {
      json bins = json::array();
      for (const auto& b : e.bins)
        bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"rank", b.rank}, {"hi_inclusive", b.hi_inclusive}});
      fj["bins"] = bins;
    }
    if (!e.amenity_columns.empty()) fj["amenity_columns"] = e.amenity_columns;
    features.push_back(std::move(fj));
  }
  return json{{"target", target_name}, {"truthy", truthy}, {"features", features}};
}

FeatureSchema FeatureSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  json j;
  in >> j;
  return from_json(j);
}

FeatureSchema FeatureSchema::default_lane_house() {
  FeatureSchema s;
  s.target_name = "rent";

  FeatureEntry district;
  district.name = "district";
  district.kind = FeatureKind::categorical;
  district.categories = {"Baoshan", "Changning", "Hongkou",   "Huangpu", "Jiading",
                         "Jing'an", "Minhang",   "Pudong",    "Putuo",   "Qingpu",
                         "Songjiang", "Xuhui",   "Yangpu",    "Zhabei"};
  s.entries.push_back(std::move(district));

  for (const char* name : {"bedrooms", "living-dining", "bathrooms", "loft", "sqmeters",
                           "building-type", "use-type-en"}) {
    FeatureEntry e;
    e.name = name;
    e.kind = FeatureKind::numeric;
    s.entries.push_back(std::move(e));
  }

  FeatureEntry ssvalue;
  ssvalue.name = "total-ssvalue";
  ssvalue.kind = FeatureKind::ordinal;
  ssvalue.bins = {{0, 3, false, 1}, {3, 6, false, 2}, {6, 8, true, 3}};
  ssvalue.amenity_columns = {"heat",         "ac",      "balcony",      "wifi",
                             "outdoorspace", "bathtub", "floorheating", "oven"};
  s.entries.push_back(std::move(ssvalue));

  s.validate();
  return s;
}

}  // namespace lanehouse
