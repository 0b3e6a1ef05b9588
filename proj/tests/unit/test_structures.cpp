#include "charlab/error.hpp"
#include "charlab/report.hpp"
#include "charlab/structure_io.hpp"
#include "charlab/structures.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

using namespace charlab;

TEST(RandomGraph, DegenerateProbabilities) {
  const auto empty = gen_random_graph(4, Rational(0), 7);
  EXPECT_EQ(empty.universe_size, 4u);
  EXPECT_EQ(empty.relation().edge_count(), 0u);
  EXPECT_EQ(gen_random_graph(4, Rational(1), 7).relation(), complete_graph(4));
}

TEST(RandomGraph, EdgeCountWithinBinomialBand) {
  // 5 sigma around C(64,2)/2 = 1008 with sigma = sqrt(2016)/2.
  const double mean = 1008, sigma = std::sqrt(2016.0) / 2;
  const auto e = static_cast<double>(gen_random_graph(64, Rational(1, 2), 7).relation().edge_count());
  EXPECT_GE(e, mean - 5 * sigma);
  EXPECT_LE(e, mean + 5 * sigma);
}

TEST(RandomGraph, SeedDeterminism) {
  EXPECT_EQ(gen_random_graph(40, Rational(1, 3), 5), gen_random_graph(40, Rational(1, 3), 5));
  EXPECT_NE(gen_random_graph(40, Rational(1, 3), 5).relation(), gen_random_graph(40, Rational(1, 3), 6).relation());
}

TEST(Tfrg, StageZeroIsThreeIsolatedPoints) {
  const auto s = gen_tfrg_staged(0, 1);
  EXPECT_EQ(s.part("X").size(), 1u);
  EXPECT_EQ(s.part("Y").size(), 1u);
  EXPECT_EQ(s.part("Z").size(), 1u);
  EXPECT_EQ(s.relation().edge_count(), 0u);
}

TEST(Tfrg, StageOneSizes) {
  const auto s = gen_tfrg_staged(1, 1);
  for (const char* p : {"X", "Y", "Z"}) EXPECT_EQ(s.part(p).size(), 4u);
  EXPECT_EQ(s.relation().triangle_count(), 0u);
}

TEST(Tfrg, StageTwoRealizesSmallPatternsOverStageZero) {
  const auto s = gen_tfrg_staged(2, 2);
  const auto& r = s.relation();
  EXPECT_EQ(r.triangle_count(), 0u);
  const char* names[3] = {"X", "Y", "Z"};
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      if (p == q) continue;
      const auto y = s.part(std::string(names[q]) + "@0")[0];
      // Both the edge and the non-edge to the stage-0 point are realized.
      bool edge = false, none = false;
      for (auto x : s.part(names[p])) (r.has_edge(x, y) ? edge : none) = true;
      EXPECT_TRUE(edge && none);
    }
}

TEST(Tfrg, CapacityErrorNamesTheStage) {
  TfrgOptions opt;
  opt.universe_cap = 40;
  try {
    gen_tfrg_staged(3, 4, opt);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("stage"), std::string::npos);
  }
}

TEST(Tfrg, PartsAreDisjointAndCoverTheUniverse) {
  const auto s = gen_tfrg_staged(2, 3);
  std::set<std::size_t> all;
  for (const char* p : {"X", "Y", "Z"})
    for (auto v : s.part(p)) EXPECT_TRUE(all.insert(v).second);
  EXPECT_EQ(all.size(), s.universe_size);
}

TEST(Crosscut, MinimalInstance) {
  const auto s = gen_crosscutting(2, 2, 1, 3);
  EXPECT_EQ(s.universe_size, 4u);
  EXPECT_EQ(s.equivalence("E").classes().size(), 2u);
  EXPECT_EQ(s.equivalence("F").classes().size(), 2u);
  for (const auto& c : s.equivalence("E").classes()) EXPECT_EQ(c.size(), 2u);
}

TEST(Crosscut, CellsShareTheirPValue) {
  const auto s = gen_crosscutting(3, 3, 2, 9);
  const auto& e = s.equivalence("E");
  const auto& f = s.equivalence("F");
  const auto& p = s.predicate("P");
  for (std::size_t a = 0; a < s.universe_size; ++a)
    for (std::size_t b = 0; b < s.universe_size; ++b)
      if (e.same(a, b) && f.same(a, b)) EXPECT_EQ(p.test(a), p.test(b));
}

TEST(Crosscut, RowsAndColumnsGiveTheOrderPattern) {
  // For all x: E(x,a_i) and F(x,b_j) imply P(x), iff i < j.
  const auto s = gen_crosscutting(4, 8, 1, 2);
  const auto& a = s.part("a_rows");
  const auto& b = s.part("b_cols");
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      bool all = true;
      for (std::size_t x = 0; x < s.universe_size; ++x)
        if (s.equivalence("E").same(x, a[i]) && s.equivalence("F").same(x, b[j]) && !s.predicate("P").test(x))
          all = false;
      EXPECT_EQ(all, i < j) << i << "," << j;
    }
}

TEST(HalfGraph, SmallCases) {
  const auto h1 = gen_half_graph(1);
  EXPECT_EQ(h1.universe_size, 2u);
  EXPECT_EQ(h1.relation().edge_count(), 0u);
  const auto h2 = gen_half_graph(2);
  EXPECT_EQ(h2.relation().edge_count(), 1u);
  EXPECT_TRUE(h2.relation().has_edge(h2.part("A")[0], h2.part("B")[1]));
}

TEST(HalfGraph, EdgeRuleAndDensity) {
  for (std::size_t k : {3, 8, 13}) {
    const auto h = gen_half_graph(k);
    const auto& a = h.part("A");
    const auto& b = h.part("B");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(h.relation().has_edge(a[i], b[j]), i < j);
    EXPECT_EQ(h.relation().edges_between(a, b), k * (k - 1) / 2);
  }
}

TEST(IpArray, OnlySameColumnPairsAreOmitted) {
  const auto g = array_p2_graph(6);
  EXPECT_EQ(g.size(), 12u);
  EXPECT_EQ(g.omitted_count(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_FALSE(g.has_edge(2 * i, 2 * i + 1));
}

TEST(ThresholdChain, PointsSeeStrictlyLaterChainElements) {
  const auto s = gen_threshold_chain(-2, 3);
  const auto& c = s.part("chain");
  const auto& p = s.part("points");
  ASSERT_EQ(c.size(), 6u);
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.relation().has_edge(p[t], c[i]), i > t);
  EXPECT_THROW(gen_threshold_chain(3, 1), ParameterError);
}

TEST(TwoEmptyChain, CommonNeighbourIffLess) {
  const auto s = gen_two_empty_order_chain(0, 5);
  const auto& r = s.relation();
  EXPECT_EQ(r.triangle_count(), 0u);
  const auto& a = s.part("a");
  const auto& b = s.part("b");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      EXPECT_EQ(r.has_edge(a[i], b[j]), j <= i);
      EXPECT_EQ(and_count(r.neighbors(a[i]), r.neighbors(b[j])) > 0, i < j) << i << "," << j;
    }
}

TEST(SmallGraphs, Shapes) {
  EXPECT_EQ(cycle_graph(6).edge_count(), 6u);
  EXPECT_EQ(star_graph(5).degree(0), 5u);
  EXPECT_EQ(complete_multipartite({2, 3}).edge_count(), 6u);
  EXPECT_EQ(complete_graph(5).omitted_count(), 0u);
  const auto p = paley_graph(13);
  for (std::size_t v = 0; v < 13; ++v) EXPECT_EQ(p.degree(v), 6u);
}

TEST(IndependentClosure, KeepsTriangleFreenessOverBase) {
  const auto s = structure_from_graph(cycle_graph(5));
  const auto c = independent_set_closure(s, {0, 1, 2, 3, 4}, 2);
  EXPECT_GT(c.universe_size, 5u);
  EXPECT_EQ(c.relation().induced(std::vector<std::size_t>{0, 1, 2, 3, 4}), cycle_graph(5));
}

TEST(StructureIo, JsonRoundTripOnCorpus) {
  for (const auto& s : {gen_tfrg_staged(1, 2), gen_crosscutting(3, 3, 2, 1), gen_half_graph(5),
                        gen_random_graph(12, Rational(1, 2), 4), gen_ip_array(3)}) {
    const auto back = structure_from_json(structure_to_json(s));
    EXPECT_TRUE(back == s);
  }
}

TEST(StructureIo, RejectsBrokenInput) {
  auto j = structure_to_json(gen_half_graph(3));
  j["relations"]["R"].push_back({0, 99});
  EXPECT_THROW(structure_from_json(j), FormatError);
  auto k = structure_to_json(gen_half_graph(3));
  k["relations"]["R"].push_back({1, 1});
  EXPECT_THROW(structure_from_json(k), FormatError);
  auto m = structure_to_json(gen_half_graph(3));
  m.erase("n");
  EXPECT_THROW(structure_from_json(m), FormatError);
}

TEST(StructureIo, SaveAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "charlab_io_test";
  const auto path = (dir / "s.json").string();
  const auto s = gen_crosscutting(2, 3, 1, 8);
  save_structure(s, path);
  EXPECT_TRUE(load_structure(path) == s);
  std::filesystem::remove_all(dir);
}

TEST(Report, CsvQuotingAndWidth) {
  CsvTable t({"a", "b"});
  t.add({"1", "x,y"});
  t.add({"2", "say \"hi\""});
  EXPECT_EQ(t.str(), "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add({"only one"}), ParameterError);
}

TEST(Report, AtomicWriteLeavesNoTempFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "charlab_atomic_test";
  std::filesystem::remove_all(dir);
  const auto path = (dir / "nested" / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(content, "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "nested")) ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(Report, DotAndEnvelope) {
  BitGraph g(3);
  g.add_edge(0, 2);
  const auto dot = graph_to_dot(g, "g");
  EXPECT_NE(dot.find("0 -- 2;"), std::string::npos);
  const auto env = report_envelope("cmd", 5, {{"x", 1}});
  EXPECT_EQ(env["seed"], 5);
  EXPECT_EQ(env["version"], kVersion);
  EXPECT_EQ(env["config"]["x"], 1);
}
