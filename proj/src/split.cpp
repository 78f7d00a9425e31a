#include "lanehouse/split.hpp"

#include <cmath>
#include <stdexcept>

#include "lanehouse/rng.hpp"

namespace lanehouse {

void SplitSpec::validate() const {
  if (!(test_fraction > 0 && test_fraction < 1))
    throw std::invalid_argument("test_fraction must be in (0, 1)");
}

std::pair<std::vector<int>, std::vector<int>> split_indices(long n, const SplitSpec& spec) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("need at least 2 rows to split");

  std::vector<int> order(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = static_cast<int>(i);
  if (spec.shuffled) {
    SplitMix64 rng = stream_rng(spec.seed, {0x73706c6974ULL});  // "split" stream
    shuffle(order, rng);
  }

  const long test_n = static_cast<long>(std::floor(spec.test_fraction * static_cast<double>(n) + 0.5));
  if (test_n < 1 || test_n >= n)
    throw std::invalid_argument("degenerate split: test size " + std::to_string(test_n));

  std::vector<int> train(order.begin(), order.end() - test_n);
  std::vector<int> test(order.end() - test_n, order.end());
  return {std::move(train), std::move(test)};
}

std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& d, const SplitSpec& spec) {
  auto [train_idx, test_idx] = split_indices(static_cast<long>(d.n()), spec);
  return {d.select_rows(train_idx), d.select_rows(test_idx)};
}

}  // namespace lanehouse
