#pragma once

// Shared synthetic-data helpers for the test suites.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lanehouse/csv.hpp"
#include "lanehouse/rng.hpp"
#include "lanehouse/schema.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse::testing {

inline double gaussian(SplitMix64& rng) {
  double u1 = rng.next_double();
  double u2 = rng.next_double();
  if (u1 < 1e-15) u1 = 1e-15;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Random dense instance with standard-normal features and a noisy linear
// target.
inline DesignMatrix random_design(int n, int p, std::uint64_t seed, double noise = 0.1) {
  SplitMix64 rng = stream_rng(seed, {0xde51});
  DesignMatrix d;
  d.x.resize(n, p);
  d.y.resize(n);
  Vector beta(p);
  for (int j = 0; j < p; ++j) beta(j) = gaussian(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) d.x(i, j) = gaussian(rng);
  for (int i = 0; i < n; ++i) d.y(i) = d.x.row(i).dot(beta) + 0.5 + noise * gaussian(rng);
  d.feature_names.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) d.feature_names[static_cast<std::size_t>(j)] = "f" + std::to_string(j);
  return d;
}

// Raw table shaped like the bundled lane-house schema, with a rent that
// actually depends on the features so model fits are meaningful.
inline RawTable synthetic_table(int n, std::uint64_t seed) {
  const std::vector<std::string> districts = FeatureSchema::default_lane_house().entries[0].categories;
  const std::vector<std::string> amenities = {"heat", "ac", "balcony", "wifi",
                                              "outdoorspace", "bathtub", "floorheating", "oven"};
  RawTable t;
  t.column_order = {"district", "rent", "bedrooms", "living-dining", "bathrooms", "loft",
                    "sqmeters", "building-type", "use-type-en"};
  for (const auto& a : amenities) t.column_order.push_back(a);

  SplitMix64 rng = stream_rng(seed, {0xcafe});
  for (int i = 0; i < n; ++i) {
    int district = static_cast<int>(rng.below(districts.size()));
    int bedrooms = 1 + static_cast<int>(rng.below(4));
    int living = static_cast<int>(rng.below(2));
    int bathrooms = 1 + static_cast<int>(rng.below(2));
    int loft = static_cast<int>(rng.below(2));
    int sqm = 20 + static_cast<int>(rng.below(120));
    int btype = 1 + static_cast<int>(rng.below(3));
    int use = 1 + static_cast<int>(rng.below(2));
    int amenity_count = 0;
    std::vector<std::string> row = {districts[static_cast<std::size_t>(district)],
                                    "",  // rent filled below
                                    std::to_string(bedrooms),
                                    std::to_string(living),
                                    std::to_string(bathrooms),
                                    std::to_string(loft),
                                    std::to_string(sqm),
                                    std::to_string(btype),
                                    std::to_string(use)};
    for (std::size_t a = 0; a < amenities.size(); ++a) {
      int has = static_cast<int>(rng.below(2));
      amenity_count += has;
      row.push_back(std::to_string(has));
    }
    double rent = 2000.0 + 450.0 * district + 900.0 * bedrooms + 350.0 * bathrooms +
                  55.0 * sqm + 250.0 * amenity_count + 300.0 * gaussian(rng);
    row[1] = std::to_string(static_cast<long long>(std::llround(std::max(rent, 500.0))));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Exact (bitwise) equality for dense Eigen expressions.
template <typename A, typename B>
bool bit_equal(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace lanehouse::testing
