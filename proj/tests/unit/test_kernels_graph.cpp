#include "charlab/error.hpp"
#include "charlab/graph.hpp"
#include "charlab/kernels.hpp"
#include "charlab/rational.hpp"
#include "charlab/rng.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace charlab;
namespace k = charlab::kernels;

namespace {

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n) {
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = rng.next();
  return w;
}

}  // namespace

TEST(Kernels, ScalarAndAvx2AgreeOnRandomWords) {
  if (!k::available(k::Isa::avx2)) GTEST_SKIP() << "no AVX2";
  const auto& s = k::scalar::table();
  const auto& v = k::avx2::table();
  Rng rng(1);
  for (std::size_t words : {0, 1, 3, 4, 5, 7, 8, 9, 16, 31, 64, 129}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = random_words(rng, words), b = random_words(rng, words);
      EXPECT_EQ(s.popcount(a.data(), words), v.popcount(a.data(), words));
      EXPECT_EQ(s.and_popcount(a.data(), b.data(), words), v.and_popcount(a.data(), b.data(), words));
      EXPECT_EQ(s.andnot_popcount(a.data(), b.data(), words), v.andnot_popcount(a.data(), b.data(), words));
      auto d1 = a, d2 = a;
      s.and_assign(d1.data(), b.data(), words);
      v.and_assign(d2.data(), b.data(), words);
      EXPECT_EQ(d1, d2);
      d1 = a, d2 = a;
      s.andnot_assign(d1.data(), b.data(), words);
      v.andnot_assign(d2.data(), b.data(), words);
      EXPECT_EQ(d1, d2);
    }
  }
}

TEST(Kernels, SubsetDegreesAgree) {
  if (!k::available(k::Isa::avx2)) GTEST_SKIP() << "no AVX2";
  Rng rng(2);
  for (std::size_t count : {0, 1, 7, 8, 9, 17, 32, 33}) {
    std::vector<std::uint32_t> masks(count);
    for (auto& m : masks) m = static_cast<std::uint32_t>(rng.next());
    for (int rep = 0; rep < 30; ++rep) {
      const auto subset = static_cast<std::uint32_t>(rng.next());
      std::vector<std::uint32_t> o1(count), o2(count);
      k::scalar::table().subset_degrees(masks.data(), count, subset, o1.data());
      k::avx2::table().subset_degrees(masks.data(), count, subset, o2.data());
      EXPECT_EQ(o1, o2);
      for (std::size_t i = 0; i < count; ++i)
        EXPECT_EQ(o1[i], static_cast<std::uint32_t>(__builtin_popcount(masks[i] & subset)));
    }
  }
}

TEST(Kernels, ScalarPopcountMatchesBuiltin) {
  Rng rng(3);
  auto a = random_words(rng, 11);
  std::uint64_t want = 0;
  for (auto w : a) want += __builtin_popcountll(w);
  EXPECT_EQ(k::scalar::table().popcount(a.data(), a.size()), want);
}

TEST(Kernels, SelectSwitchesActiveTable) {
  const auto before = k::active().isa;
  k::select(k::Isa::scalar);
  EXPECT_EQ(k::active().isa, k::Isa::scalar);
  if (k::available(k::Isa::avx2)) {
    k::select(k::Isa::avx2);
    EXPECT_EQ(k::active().isa, k::Isa::avx2);
  } else {
    EXPECT_THROW(k::select(k::Isa::avx2), ParameterError);
  }
  k::select(before);
}

TEST(Kernels, GraphCountsIdenticalUnderBothIsas) {
  if (!k::available(k::Isa::avx2)) GTEST_SKIP() << "no AVX2";
  const auto before = k::active().isa;
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = testgen::random_graph(rng, 70 + rep * 13, Rational(1, 3));
    k::select(k::Isa::scalar);
    const auto e1 = g.edge_count(), t1 = g.triangle_count();
    k::select(k::Isa::avx2);
    EXPECT_EQ(e1, g.edge_count());
    EXPECT_EQ(t1, g.triangle_count());
  }
  k::select(before);
}

TEST(Bitset, BasicOperations) {
  Bitset b(130);
  b.set(0);
  b.set(64);
  b.set(129);
  EXPECT_EQ(b.count(), 3u);
  EXPECT_EQ(b.first(), 0u);
  EXPECT_EQ(b.next(1), 64u);
  EXPECT_EQ(b.next(130), Bitset::npos);
  EXPECT_EQ(b.members(), (std::vector<std::size_t>{0, 64, 129}));
  const auto c = b.complement();
  EXPECT_EQ(c.count(), 127u);
  EXPECT_FALSE(c.test(64));
  EXPECT_EQ(Bitset::full(130).count(), 130u);
  b.reset(64);
  EXPECT_FALSE(b.test(64));
}

TEST(Bitset, AlgebraMatchesSetSemantics) {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + testgen::below(rng, 200);
    Bitset a(n), b(n);
    std::vector<bool> ra(n), rb(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next() & 1) a.set(i), ra[i] = true;
      if (rng.next() & 1) b.set(i), rb[i] = true;
    }
    Bitset x = a, y = a, z = a;
    x &= b;
    y |= b;
    z.and_not(b);
    std::size_t both = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(x.test(i), ra[i] && rb[i]);
      EXPECT_EQ(y.test(i), ra[i] || rb[i]);
      EXPECT_EQ(z.test(i), ra[i] && !rb[i]);
      both += ra[i] && rb[i];
    }
    EXPECT_EQ(and_count(a, b), both);
  }
}

TEST(BitGraph, EdgesAreSymmetricAndLoopFree) {
  BitGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(2, 2);
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(2, 2));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.omitted_count(), 9u);
  EXPECT_TRUE(g.is_symmetric_loop_free());
}

TEST(BitGraph, DualSwapsEdgesAndOmissions) {
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = testgen::random_graph(rng, 5 + rep, Rational(1, 2));
    const auto d = g.dual();
    EXPECT_EQ(d.edge_count(), g.omitted_count());
    EXPECT_EQ(d.dual(), g);
    EXPECT_TRUE(d.is_symmetric_loop_free());
  }
}

TEST(BitGraph, TriangleCountMatchesBruteForce) {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = testgen::random_graph(rng, 4 + rep, Rational(2, 5));
    EXPECT_EQ(g.triangle_count(), testgen::triangles_brute(g));
    const auto t = g.find_triangle();
    EXPECT_EQ(t.has_value(), g.triangle_count() > 0);
    if (t) EXPECT_TRUE(g.has_edge((*t)[0], (*t)[1]) && g.has_edge((*t)[1], (*t)[2]) && g.has_edge((*t)[0], (*t)[2]));
  }
}

TEST(BitGraph, EdgesBetweenAndWithin) {
  Rng rng(8);
  const auto g = testgen::random_graph(rng, 30, Rational(1, 2));
  const auto xs = testgen::random_subset(rng, 30, 10);
  std::vector<std::size_t> ys;
  for (std::size_t v = 0; v < 30; ++v)
    if (!std::binary_search(xs.begin(), xs.end(), v)) ys.push_back(v);
  std::size_t between = 0;
  for (auto x : xs)
    for (auto y : ys) between += g.has_edge(x, y);
  EXPECT_EQ(g.edges_between(xs, ys), between);
  EXPECT_EQ(g.edges_between(xs, Bitset::of(30, ys)), between);
  EXPECT_EQ(g.edges_within(xs), xs.size() * (xs.size() - 1) / 2 - testgen::omitted_in(g, xs));
}

TEST(BitGraph, InducedAndGrow) {
  BitGraph g(4);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  std::vector<std::size_t> vs{3, 0};
  const auto h = g.induced(vs);
  EXPECT_EQ(h.size(), 2u);
  EXPECT_TRUE(h.has_edge(0, 1));
  g.grow(3);
  EXPECT_EQ(g.size(), 7u);
  EXPECT_TRUE(g.has_edge(0, 3));
  EXPECT_EQ(g.degree(6), 0u);
}

TEST(Rational, ParseAndCeil) {
  EXPECT_EQ(parse_rational("3/12"), Rational(1, 4));
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_THROW(parse_rational("1/0"), ParameterError);
  EXPECT_THROW(parse_rational("abc"), ParameterError);
  EXPECT_EQ(ceil_mul(Rational(3, 10), 16), 5);
  EXPECT_EQ(ceil_mul(Rational(1, 4), 16), 4);
  EXPECT_EQ(pow(Rational(2, 5), 2), Rational(4, 25));
  EXPECT_EQ(to_string(Rational(7, 16)), "7/16");
}

TEST(Rng, SeededStreamsAreReproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  Rng c(9);
  std::size_t ones = 0;
  for (int i = 0; i < 4000; ++i) ones += c.bernoulli(Rational(1, 4));
  EXPECT_NEAR(static_cast<double>(ones) / 4000, 0.25, 0.03);
  Rng d(9);
  EXPECT_FALSE(d.bernoulli(Rational(0)));
  EXPECT_TRUE(d.bernoulli(Rational(1)));
}
