#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace kgq {

// All stochastic choices draw from one of these. The standard distributions
// are implementation-defined, so sampling helpers below only rely on the raw
// 64-bit output of mt19937_64, which is fully specified.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // Rejection sampling on the top of the range to remove modulo bias.
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

// Uniform real in [0, 1) with 53 bits of precision.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace kgq
