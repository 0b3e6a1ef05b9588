#include "charlab/error.hpp"
#include "charlab/independence.hpp"
#include "charlab/structures.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace charlab;

namespace {

std::vector<IndependencePart> plain_parts(const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<IndependencePart> out;
  for (std::size_t i = 0; i < groups.size(); ++i) out.push_back({"P" + std::to_string(i), groups[i], {}});
  return out;
}

BlockArray tfrg_array(std::size_t rows = 6) {
  static const auto s = gen_tfrg_staged(2, 4);
  ArrayOptions opt;
  opt.extend = true;
  return build_array(s.relation(), tfrg_parts(s), ConfigTemplate::triangle(), rows, opt);
}

std::vector<Block> all_blocks(const BlockArray& a) {
  std::vector<Block> b;
  for (std::size_t l = 0; l < a.blocks(); ++l) b.push_back(a.block(l));
  return b;
}

bool has_induced_c4(const BitGraph& g) {
  const std::size_t n = g.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          const std::size_t v[4] = {a, b, c, d};
          std::size_t edges = 0;
          bool all_two = true;
          for (int i = 0; i < 4; ++i) {
            std::size_t deg = 0;
            for (int j = 0; j < 4; ++j) deg += i != j && g.has_edge(v[i], v[j]);
            all_two = all_two && deg == 2;
            edges += deg;
          }
          if (all_two && edges == 8) return true;
        }
  return false;
}

}  // namespace

TEST(Depth, SinglePartIsVacuous) {
  const auto r = empty_graph(4);
  const auto d = independence_depth(r, plain_parts({{0, 1, 2, 3}}), 1, 1);
  EXPECT_TRUE(d.holds);
}

TEST(Depth, TfrgStageTwoIsTwoButNotThree) {
  const auto s = gen_tfrg_staged(2, 4);
  const auto parts = tfrg_parts(s);
  EXPECT_TRUE(independence_depth(s.relation(), parts, 2, 1).holds);
  const auto d3 = independence_depth(s.relation(), parts, 3, 1);
  ASSERT_FALSE(d3.holds);
  bool edge_failure = false;
  for (const auto& c : d3.checks)
    if (!c.holds && c.edge_failure) {
      edge_failure = true;
      const auto& f = *c.edge_failure;
      // An eta with an internal edge: any realizer would close a triangle.
      bool internal = false;
      for (auto u : f.eta)
        for (auto v : f.eta) internal = internal || s.relation().has_edge(u, v);
      EXPECT_TRUE(internal);
      std::vector<std::size_t> seq = f.eta, eta(f.eta.size()), nu;
      seq.insert(seq.end(), f.nu.begin(), f.nu.end());
      std::iota(eta.begin(), eta.end(), 0);
      for (std::size_t i = f.eta.size(); i < seq.size(); ++i) nu.push_back(i);
      EXPECT_FALSE(pattern_realization(s.relation(), seq, eta, nu, parts[c.part].members));
    }
  EXPECT_TRUE(edge_failure);
}

TEST(Depth, CompleteTripartiteFailsWithNonEmptyNu) {
  const auto r = complete_multipartite({3, 3, 3});
  const auto parts = plain_parts({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  const auto d = independence_depth(r, parts, 3, 1);
  EXPECT_FALSE(d.holds);
  for (const auto& c : d.checks)
    if (c.failure) EXPECT_FALSE(c.failure->nu.empty());
}

TEST(Depth, AntitoneInKAndCap) {
  for (std::size_t stages : {1, 2}) {
    const auto s = gen_tfrg_staged(stages, 3);
    const auto parts = tfrg_parts(s);
    bool prev = true;
    for (std::size_t k = 1; k <= 3; ++k) {
      const bool now = independence_depth(s.relation(), parts, k, 1).holds;
      if (!prev) EXPECT_FALSE(now) << "stages " << stages << " k " << k;
      prev = now;
    }
    for (std::size_t k = 2; k <= 3; ++k) {
      bool prev_cap = true;
      for (std::size_t cap = 1; cap <= 3; ++cap) {
        const bool now = independence_depth(s.relation(), parts, k, cap).holds;
        if (!prev_cap) EXPECT_FALSE(now);
        prev_cap = now;
      }
    }
  }
}

TEST(Depth, RandomTripartiteAntitoneProperty) {
  Rng rng(51);
  for (int rep = 0; rep < 6; ++rep) {
    const auto g = testgen::random_graph(rng, 18, Rational(1, 2));
    std::vector<std::vector<std::size_t>> groups(3);
    for (std::size_t v = 0; v < 18; ++v) groups[v % 3].push_back(v);
    const auto parts = plain_parts(groups);
    const bool k2 = independence_depth(g, parts, 2, 1).holds;
    const bool k3 = independence_depth(g, parts, 3, 1).holds;
    if (k3) EXPECT_TRUE(k2);
    const bool c2 = independence_depth(g, parts, 2, 2).holds;
    if (c2) EXPECT_TRUE(k2);
  }
}

TEST(Depth, ThreadedAgrees) {
  const auto s = gen_tfrg_staged(2, 3);
  const auto parts = tfrg_parts(s);
  const auto a = independence_depth(s.relation(), parts, 3, 1, 1);
  const auto b = independence_depth(s.relation(), parts, 3, 1, 4);
  EXPECT_EQ(a.holds, b.holds);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].failures, b.checks[i].failures);
}

TEST(Depth, OverlappingPartsRejected) {
  EXPECT_THROW(independence_depth(empty_graph(4), plain_parts({{0, 1}, {1, 2}}), 2, 1), ParameterError);
}

TEST(Template, JsonRoundTripAndColumns) {
  const auto t = ConfigTemplate::from_mask(2, 2, 0b101101);
  EXPECT_EQ(ConfigTemplate::from_json(t.to_json()), t);
  EXPECT_THROW(t.edge(0, 1, 1, 1), ParameterError);
  const auto tri = ConfigTemplate::triangle();
  EXPECT_EQ(tri.vertices(), 3u);
  EXPECT_EQ(tri.cross_pairs().size(), 3u);
  EXPECT_TRUE(tri.edge(0, 0, 0, 2));
}

TEST(Template, RealizeTriangle) {
  EXPECT_TRUE(realize_template(complete_graph(3), ConfigTemplate::triangle()));
  const auto s = gen_tfrg_staged(2, 3);
  EXPECT_FALSE(realize_template(s.relation(), ConfigTemplate::triangle()));
  EXPECT_THROW(realize_template(complete_graph(30), ConfigTemplate::uniform(3, 3, false), 10), BudgetError);
}

TEST(Forbidden, TfrgForbidsTheTriangle) {
  const auto r = find_forbidden_config([](std::uint64_t seed) { return gen_tfrg_staged(1 + seed % 2, 3).relation(); },
                                       2, 1);
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_EQ(*r.config, ConfigTemplate::triangle());
}

TEST(Forbidden, RandomGraphsForbidNothingSmall) {
  const auto r = find_forbidden_config(
      [](std::uint64_t seed) { return gen_random_graph(24, Rational(1, 2), seed).relation(); }, 2, 1);
  EXPECT_EQ(r.status, SearchStatus::not_found);
  EXPECT_EQ(r.templates_tried, 8u);
}

TEST(Forbidden, FourCycleFreeFamilyForbidsC4) {
  for (std::uint64_t seed : {0, 1, 2}) EXPECT_FALSE(has_induced_c4(four_cycle_free_graph(seed)));
  const auto r = find_forbidden_config(four_cycle_free_graph, 3, 1);
  ASSERT_EQ(r.status, SearchStatus::found);
  const auto& t = *r.config;
  BitGraph g(4);
  for (auto [u, v] : t.cross_pairs())
    if (t.edge(0, u, 0, v)) g.add_edge(u, v);
  EXPECT_EQ(g.edge_count(), 4u);
  for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2u);
}

TEST(Helix, ColumnsAndBeta) {
  EXPECT_FALSE(in_col(2, 0, 0));
  EXPECT_FALSE(in_col(2, 0, 1));
  EXPECT_TRUE(in_col(2, 0, 2));
  EXPECT_FALSE(in_col(2, 2, 0));  // wraps: 2 + 1 = 0 mod 3
  EXPECT_TRUE(in_col(2, 2, 1));
  EXPECT_TRUE(beta_before(2, 0, 2, 1, 0));
  EXPECT_FALSE(beta_before(2, 0, 1, 1, 0));
  EXPECT_FALSE(beta_before(2, 1, 2, 1, 0));
  EXPECT_TRUE(beta_before(3, 1, 0, 1, 2));
}

TEST(Helix, StageTwoRefusesSixRows) {
  const auto s = gen_tfrg_staged(2, 4);
  try {
    build_array(s.relation(), tfrg_parts(s), ConfigTemplate::triangle(), 6);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("eta="), std::string::npos);
  }
}

TEST(Helix, ExtendedArrayScansAndChains) {
  const auto a = tfrg_array();
  EXPECT_EQ(a.blocks(), 6u);
  EXPECT_TRUE(verify_array(a, ConfigTemplate::triangle()).holds);
  EXPECT_EQ(a.relation.triangle_count(), 0u);
  const auto blocks = all_blocks(a);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      EXPECT_TRUE(less_ell(blocks[i], blocks[j], ConfigTemplate::triangle(), a.relation)) << i << "<" << j;
}

TEST(Helix, FirstRowsFollowTheTriangleBullets) {
  // b_i R a_j for j <= i, c_i R b_j and c_i R a_j for j < i.
  const auto a = tfrg_array(4);
  const auto& r = a.relation;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (j <= i) EXPECT_TRUE(r.has_edge(a.rows[i][1], a.rows[j][0]));
      if (j < i) EXPECT_TRUE(r.has_edge(a.rows[i][2], a.rows[j][1]));
    }
}

TEST(Helix, SingleBlockAndAllZeroTemplate) {
  const auto s = gen_tfrg_staged(2, 4);
  ArrayOptions opt;
  opt.extend = true;
  const auto one = build_array(s.relation(), tfrg_parts(s), ConfigTemplate::triangle(), 1, opt);
  EXPECT_EQ(one.blocks(), 1u);
  const auto zero = ConfigTemplate::uniform(1, 2, false);
  const auto a = build_array(s.relation(), tfrg_parts(s), zero, 4, opt);
  EXPECT_TRUE(verify_array(a, zero).holds);
  for (std::size_t rho = 0; rho < a.rows.size(); ++rho)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t rho2 = 0; rho2 <= rho; ++rho2)
        for (std::size_t k2 = 0; k2 < 3; ++k2)
          if (beta_before(2, rho2, k2, rho, k)) EXPECT_FALSE(a.relation.has_edge(a.rows[rho][k], a.rows[rho2][k2]));
}

TEST(Helix, TemplateShapeMismatchRejected) {
  const auto s = gen_tfrg_staged(1, 2);
  EXPECT_THROW(build_array(s.relation(), tfrg_parts(s), ConfigTemplate::uniform(1, 3, true), 2), ParameterError);
}

TEST(LessEll, SelfComparisonAndMissingEdge) {
  const auto tri = ConfigTemplate::triangle();
  const Block y{{0, 1, 2}};
  EXPECT_FALSE(less_ell(y, y, tri, empty_graph(3)));
  BitGraph g = complete_graph(6);
  const Block a{{0, 1, 2}}, b{{3, 4, 5}};
  EXPECT_TRUE(less_ell(a, b, tri, g));
  // Col(2) = {1}: z's column 2 must see y's column 1.
  g.remove_edge(5, 1);
  EXPECT_FALSE(less_ell(a, b, tri, g));
}

TEST(Loops, NoneOnTfrgArray) {
  const auto a = tfrg_array();
  const auto ls = pseudo_loop_search(all_blocks(a), ConfigTemplate::triangle(), a.relation, 2);
  EXPECT_EQ(ls.status, SearchStatus::none);
}

TEST(Loops, TooFewCandidates) {
  const auto a = tfrg_array(2);
  EXPECT_EQ(pseudo_loop_search(all_blocks(a), ConfigTemplate::triangle(), a.relation, 2).status, SearchStatus::none);
}

TEST(Loops, PlantedLoopIsFoundAndRevalidated) {
  auto a = tfrg_array();
  const auto g = ConfigTemplate::triangle();
  const Block t = plant_loop_block(a, g, a.blocks() - 1, 0);
  const std::vector<Block> cands{a.block(0), a.block(a.blocks() - 1), t};
  const auto ls = pseudo_loop_search(cands, g, a.relation, 2);
  ASSERT_EQ(ls.status, SearchStatus::found);
  EXPECT_TRUE(loop_valid(*ls.loop, cands, g, a.relation));
  EXPECT_GE(ls.loop->m, 1u);
  EXPECT_LT(ls.loop->m, 2u);
  const auto j = loop_json(*ls.loop, cands);
  EXPECT_EQ(j["blocks"].size(), 3u);
}

TEST(Loops, LoopValidRejectsTamperedReport) {
  auto a = tfrg_array();
  const auto g = ConfigTemplate::triangle();
  const Block t = plant_loop_block(a, g, a.blocks() - 1, 0);
  const std::vector<Block> cands{a.block(0), a.block(a.blocks() - 1), t};
  auto loop = *pseudo_loop_search(cands, g, a.relation, 2).loop;
  std::swap(loop.blocks[0], loop.blocks[1]);
  EXPECT_FALSE(loop_valid(loop, cands, g, a.relation));
}

TEST(Sop3FromArray, SixBlocksPass) {
  const auto a = tfrg_array();
  const auto r = sop3_from_array(a, ConfigTemplate::triangle());
  EXPECT_TRUE(r.chain_ok);
  EXPECT_FALSE(r.degenerate);
  EXPECT_TRUE(r.verdict.c1.holds);
  EXPECT_TRUE(r.verdict.c2.holds);
  EXPECT_TRUE(r.verdict.c3.holds);
  EXPECT_EQ(r.witnesses.size(), r.a_tuples.size());
}

TEST(Sop3FromArray, SingleBlockIsDegenerate) {
  const auto a = tfrg_array(1);
  const auto r = sop3_from_array(a, ConfigTemplate::triangle());
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(r.verdict.c1.holds && r.verdict.c3.holds);
}

TEST(Sop3FromArray, PlantedBlockFlipsConditionThree) {
  auto a = tfrg_array();
  const auto g = ConfigTemplate::triangle();
  const Block t = plant_loop_block(a, g, std::vector<std::size_t>{3, 4}, std::vector<std::size_t>{0, 1});
  Sop3Options opt;
  opt.extra_objects = {t};
  const auto r = sop3_from_array(a, g, opt);
  ASSERT_FALSE(r.verdict.c3.holds);
  EXPECT_EQ(*r.verdict.c3.i, 0u);
  EXPECT_EQ(*r.verdict.c3.j, 1u);
  ASSERT_TRUE(r.c3_loop);
}

TEST(Sop3FromArray, BrokenChainIsReported) {
  auto a = tfrg_array(3);
  std::swap(a.rows[0], a.rows[2]);
  const auto r = sop3_from_array(a, ConfigTemplate::triangle());
  EXPECT_FALSE(r.chain_ok);
  EXPECT_TRUE(r.chain_failure);
}

TEST(ArrayJson, CarriesFullIndices) {
  const auto a = tfrg_array(3);
  const auto j = array_json(a);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["universe"], a.relation.size());
}
