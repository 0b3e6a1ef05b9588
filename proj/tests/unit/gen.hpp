#pragma once
// Hand-rolled generators and brute-force oracles shared by the unit tests.

#include "charlab/graph.hpp"
#include "charlab/rational.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace testgen {

inline charlab::BitGraph random_graph(charlab::Rng& rng, std::size_t n, charlab::Rational p) {
  charlab::BitGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

inline std::size_t below(charlab::Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.below(n));
}

inline std::vector<std::size_t> random_subset(charlab::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(v[i], v[i + below(rng, n - i)]);
  v.resize(k);
  std::sort(v.begin(), v.end());
  return v;
}

inline std::size_t omitted_in(const charlab::BitGraph& g, const std::vector<std::size_t>& s) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) c += !g.has_edge(s[i], s[j]);
  return c;
}

// max over n-subsets of omitted pairs, by mask enumeration.
inline std::size_t alpha_brute(const charlab::BitGraph& g, std::size_t n) {
  std::size_t best = 0;
  const std::size_t v = g.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << v); ++m) {
    if (static_cast<std::size_t>(__builtin_popcountll(m)) != n) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < v; ++i)
      if (m >> i & 1) s.push_back(i);
    best = std::max(best, omitted_in(g, s));
  }
  return best;
}

// Largest edge-free vertex set.
inline std::size_t independence_brute(const charlab::BitGraph& g) {
  std::size_t best = 0;
  const std::size_t v = g.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << v); ++m) {
    bool ok = true;
    for (std::size_t i = 0; i < v && ok; ++i)
      if (m >> i & 1)
        for (std::size_t j = i + 1; j < v && ok; ++j)
          if ((m >> j & 1) && g.has_edge(i, j)) ok = false;
    if (ok) best = std::max<std::size_t>(best, __builtin_popcountll(m));
  }
  return best;
}

inline std::size_t triangles_brute(const charlab::BitGraph& g) {
  std::size_t c = 0;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      for (std::size_t d = b + 1; d < g.size(); ++d)
        c += g.has_edge(a, b) && g.has_edge(b, d) && g.has_edge(a, d);
  return c;
}

}  // namespace testgen
