#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tamlearn {

// Standard distributions are implementation-defined; these helpers keep
// shuffles and synthetic corpora identical across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling. `bound` > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace tamlearn
