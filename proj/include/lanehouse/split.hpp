#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lanehouse/types.hpp"

namespace lanehouse {

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  bool shuffled = true;

  void validate() const;
};

// Disjoint (train, test) index sets covering 0..n-1; test size is
// round-half-up(test_fraction * n) and test rows come from the tail of
// the (optionally shuffled) index sequence.
std::pair<std::vector<int>, std::vector<int>> split_indices(long n, const SplitSpec& spec);

std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& d, const SplitSpec& spec);

}  // namespace lanehouse
