#pragma once

#include "charlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace charlab {

// Seeded generator whose derived draws are defined here rather than by the
// standard library's distributions, so output is identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). Uses a 128-bit multiply-shift; bias is below 2^-64 * bound.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    unsigned __int128 wide = static_cast<unsigned __int128>(next()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  // True with probability exactly p (for p with denominator dividing 2^64 up to rounding).
  bool bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const auto num = static_cast<unsigned __int128>(p.numerator());
    const auto den = static_cast<unsigned __int128>(p.denominator());
    return static_cast<unsigned __int128>(next()) * den < (num << 64);
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices from [0, n), in increasing order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream index so parallel workers get disjoint streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace charlab
