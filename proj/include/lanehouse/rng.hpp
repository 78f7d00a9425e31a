#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace lanehouse {

// SplitMix64 finalizer; also used to fold stream ids into seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Portable 64-bit generator (SplitMix64). All randomness in the project
// flows through this type so results are identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is negligible for the n used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform in [0, 1) with 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a root seed and a list of stream ids,
// e.g. (seed, tree_index) for bootstraps or (seed, tree_index, node_id)
// for per-node feature draws.
inline SplitMix64 stream_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t id : ids) s = mix64(s ^ mix64(id + 0x632be59bd9b4e019ULL));
  return SplitMix64(s);
}

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace lanehouse
