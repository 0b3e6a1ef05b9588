#include "charlab/counting.hpp"
#include "charlab/error.hpp"
#include "charlab/structures.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

using namespace charlab;

TEST(Alpha, CompleteAndEmptyGraphs) {
  for (std::size_t n = 2; n <= 7; ++n) {
    EXPECT_EQ(alpha_exact(complete_graph(9), n).value, 0u);
    const auto a = alpha_exact(empty_graph(9), n);
    EXPECT_EQ(a.value, n * (n - 1) / 2);
    EXPECT_TRUE(a.exact);
  }
}

TEST(Alpha, PureArrayAtSevenIsThree) {
  const auto a = alpha_exact(array_p2_graph(6), 7);
  EXPECT_EQ(a.value, 3u);
  EXPECT_EQ(testgen::alpha_brute(array_p2_graph(6), 7), 3u);
}

TEST(Alpha, PureArrayFloorHalfUpToTwelve) {
  const auto g = array_p2_graph(6);
  for (std::size_t n = 2; n <= 12; ++n) EXPECT_EQ(alpha_exact(g, n).value, n / 2) << n;
}

TEST(Alpha, MatchesBruteForceOnRandomGraphs) {
  Rng rng(21);
  for (int rep = 0; rep < 12; ++rep) {
    const std::size_t v = 6 + rep % 8;
    const auto g = testgen::random_graph(rng, v, Rational(1 + rep % 4, 5));
    for (std::size_t n = 2; n <= v; n += 2) {
      const auto a = alpha_exact(g, n);
      EXPECT_EQ(a.value, testgen::alpha_brute(g, n));
      EXPECT_EQ(a.witness.size(), n);
      EXPECT_EQ(testgen::omitted_in(g, a.witness), a.value);
    }
  }
}

TEST(Alpha, BudgetExceededThrows) {
  CountingBudget b;
  b.subset_budget = 10;
  EXPECT_THROW(alpha_exact(empty_graph(30), 10, b), BudgetError);
}

TEST(Alpha, LowerBoundsNeverExceedExact) {
  Rng rng(22);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = testgen::random_graph(rng, 14, Rational(1, 2));
    for (std::size_t n : {3, 5, 8}) {
      const auto ex = alpha_exact(g, n).value;
      for (auto strat : {AlphaStrategy::greedy, AlphaStrategy::sampled}) {
        const auto lo = alpha_lower(g, n, strat, rep);
        EXPECT_LE(lo.value, ex);
        EXPECT_FALSE(lo.exact);
        EXPECT_EQ(testgen::omitted_in(g, lo.witness), lo.value);
      }
    }
  }
}

TEST(Alpha, GreedyOnHalfGraphFindsTheEmptySide) {
  const auto h = gen_half_graph(16);
  EXPECT_GE(alpha_lower(h.relation(), 8, AlphaStrategy::greedy).value, 28u);
  EXPECT_EQ(alpha_lower(empty_graph(10), 5, AlphaStrategy::greedy).value, 10u);
  EXPECT_EQ(alpha_lower(complete_graph(10), 5, AlphaStrategy::greedy).value, 0u);
}

TEST(Turan, Formula) {
  EXPECT_EQ(turan_upper(3, 10), Rational(25));
  EXPECT_EQ(turan_upper(2, 10), Rational(0));
  EXPECT_EQ(turan_upper(4, 6), Rational(12));
}

TEST(Turan, ConsistencyOnPlantedGraph) {
  // Complete graph minus a perfect matching: largest empty graph has 2 vertices.
  BitGraph g = complete_graph(12);
  for (std::size_t i = 0; i < 12; i += 2) g.remove_edge(i, i + 1);
  const auto tc = turan_consistency(g, 3, 12);
  EXPECT_TRUE(tc.applicable);
  EXPECT_EQ(tc.max_empty, 2u);
  EXPECT_EQ(tc.alpha, 6u);
  EXPECT_TRUE(tc.holds);
}

TEST(Turan, PropertyOverRandomGraphs) {
  Rng rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    const auto g = testgen::random_graph(rng, 8 + rep % 6, Rational(3, 4));
    for (std::size_t k : {3, 4}) {
      const auto tc = turan_consistency(g, k, g.size());
      if (tc.applicable) EXPECT_LE(Rational(static_cast<std::int64_t>(tc.alpha)), tc.bound);
    }
  }
}

TEST(MaxEmpty, KnownValuesAndBruteForce) {
  EXPECT_EQ(max_empty_graph(complete_graph(7)).size, 1u);
  EXPECT_EQ(max_empty_graph(empty_graph(7)).size, 7u);
  const auto h = gen_half_graph(8);
  // A full side plus the opposite end vertex with no neighbours there (b_1 or a_k).
  EXPECT_EQ(max_empty_graph(h.relation()).size, 9u);
  EXPECT_EQ(testgen::independence_brute(h.relation()), 9u);
  Rng rng(24);
  for (int rep = 0; rep < 15; ++rep) {
    const auto g = testgen::random_graph(rng, 12, Rational(1, 2));
    const auto r = max_empty_graph(g);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.size, testgen::independence_brute(g));
    EXPECT_EQ(testgen::omitted_in(g, r.witness), r.size * (r.size - 1) / 2);
  }
}

TEST(EmptyPair, CompleteBipartiteAndComplete) {
  const auto kb = complete_multipartite({6, 6});
  const auto r = empty_pair_search(kb, 3);
  ASSERT_EQ(r.status, SearchStatus::found);
  for (auto x : r.xs)
    for (auto y : r.ys) EXPECT_FALSE(kb.has_edge(x, y));
  EXPECT_EQ(empty_pair_search(complete_graph(8), 1).status, SearchStatus::none);
}

TEST(EmptyPair, HalfGraphShape) {
  const auto h = gen_half_graph(20);
  const auto r = empty_pair_search(h.relation(), 5);
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_EQ(r.xs.size(), 5u);
  EXPECT_EQ(r.ys.size(), 5u);
  for (auto x : r.xs)
    for (auto y : r.ys) EXPECT_FALSE(h.relation().has_edge(x, y));
}

TEST(OmissionProfile, RowsAndMonotonicity) {
  const auto prof = omission_profile(array_p2_graph(5), {2, 3, 4, 5, 6}, 3);
  ASSERT_EQ(prof.rows.size(), 5u);
  for (const auto& r : prof.rows) {
    EXPECT_EQ(r.alpha.value, r.n / 2);
    EXPECT_EQ(r.floor_half, r.n / 2);
    EXPECT_EQ(r.turan_upper, turan_upper(3, r.n));
  }
  EXPECT_TRUE(prof.monotone);
}

TEST(Regime, EmptyCompleteAndArrayFamilies) {
  const std::vector<std::size_t> ns{4, 6, 8, 10};
  const auto e = regime_classify([](std::size_t n) { return empty_graph(n); }, ns);
  EXPECT_EQ(e.regime, Regime::quadratic_with_empty_pair);
  const auto c = regime_classify([](std::size_t n) { return complete_graph(n); }, ns);
  EXPECT_EQ(c.regime, Regime::subquadratic);
  for (const auto& r : c.rows) EXPECT_EQ(r.ratio, 0.0);
  const auto a = regime_classify([](std::size_t n) { return array_p2_graph(n); }, ns);
  EXPECT_EQ(a.regime, Regime::subquadratic);
  for (const auto& r : a.rows) EXPECT_EQ(r.alpha, r.n / 2);
}
