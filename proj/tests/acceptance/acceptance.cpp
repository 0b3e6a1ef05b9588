// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "charlab/charseq.hpp"
#include "charlab/counting.hpp"
#include "charlab/error.hpp"
#include "charlab/independence.hpp"
#include "charlab/orderprops.hpp"
#include "charlab/regularity.hpp"
#include "charlab/rng.hpp"
#include "charlab/structures.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace charlab;

namespace {

// Pinned limits.
constexpr double kAlphaSeconds = 30.0;
constexpr double kLoopSeconds = 60.0;
constexpr std::size_t kEmbedSeeds = 100;
constexpr std::size_t kEmbedRequired = 95;
constexpr std::size_t kTuranGraphs = 50;
constexpr std::size_t kLedgerGraphs = 20;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ids(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

Outcome alpha_lower_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t w = 6;
  // The P_2 graph read off the array structure must be the pure array graph.
  const auto s = gen_ip_array(w);
  std::vector<std::size_t> params;
  for (std::size_t i = 0; i < w; ++i) {
    params.push_back(s.part("row0")[i]);
    params.push_back(s.part("row1")[i]);
  }
  const auto cs = compute_charseq(s, builtin_formula("edge"), 2, singletons(params));
  const BitGraph g = array_p2_graph(w);
  if (!(cs.p2_graph() == g)) return {false, "P_2 of the array structure differs from the pure array graph"};
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto a = alpha_exact(g, n);
    if (!a.exact || a.value != n / 2)
      return {false, "alpha(" + std::to_string(n) + ")=" + std::to_string(a.value) + ", want " + std::to_string(n / 2)};
  }
  const double t = seconds_since(t0);
  return {t < kAlphaSeconds, "alpha(n)=floor(n/2) for n=2..12, w=6, " + std::to_string(t) + " s"};
}

Outcome turan_consistency_sweep() {
  std::size_t applicable = 0, violations = 0;
  const Rational probs[] = {Rational(1, 2), Rational(2, 3), Rational(3, 4), Rational(5, 6)};
  for (std::size_t i = 0; i < kTuranGraphs; ++i) {
    const std::size_t n = 10 + i % 9;
    const BitGraph g = gen_random_graph(n, probs[i % 4], 1000 + i).relation();
    for (std::size_t k : {3, 4, 5}) {
      const auto tc = turan_consistency(g, k, n);
      if (!tc.applicable) continue;
      ++applicable;
      if (!tc.holds) ++violations;
    }
  }
  return {violations == 0 && applicable > 0, std::to_string(applicable) + " applicable (graph,k) cases, " +
                                                 std::to_string(violations) + " violations"};
}

Outcome eps0_arithmetic() {
  const Rational eps0 = key_lemma_eps0(Rational(1, 2), Rational(1, 10), 2);
  if (eps0 != Rational(1, 25)) return {false, "eps0 = " + to_string(eps0)};
  // A tripartite graph partitioned by its parts; the embedding must refuse epsilon = 1/10.
  BitGraph g(30);
  Rng rng(3);
  for (std::size_t u = 0; u < 30; ++u)
    for (std::size_t v = u + 1; v < 30; ++v)
      if (u / 10 != v / 10 && rng.bernoulli(Rational(1, 2))) g.add_edge(u, v);
  std::vector<std::vector<std::size_t>> classes(3);
  for (std::size_t v = 0; v < 30; ++v) classes[v / 10].push_back(v);
  PartitionConfig cfg;
  cfg.epsilon = Rational(1, 10);
  const auto p = partition_from_classes(g, classes, cfg, false);
  try {
    key_lemma_embed(g, p, Rational(1, 2), complete_graph(3), {0, 1, 2});
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    return {msg.find("1/25") != std::string::npos, "eps0 = 1/25 exactly; rejected: " + msg};
  }
  return {false, "embedding accepted epsilon = 1/10"};
}

Outcome key_lemma_embedding() {
  const Rational delta(2, 5), eps(1, 50);
  const Rational eps0 = key_lemma_eps0(delta, eps, 2);
  if (eps > eps0) return {false, "epsilon above eps0"};
  std::size_t found = 0, valid = 0;
  const BitGraph tri = complete_graph(3);
  for (std::size_t seed = 0; seed < kEmbedSeeds; ++seed) {
    BitGraph g(300);
    Rng rng(derive_seed(4, seed));
    for (std::size_t u = 0; u < 300; ++u)
      for (std::size_t v = u + 1; v < 300; ++v)
        if (u / 100 != v / 100 && rng.bernoulli(Rational(1, 2))) g.add_edge(u, v);
    std::vector<std::vector<std::size_t>> classes(3);
    for (std::size_t v = 0; v < 300; ++v) classes[v / 100].push_back(v);
    PartitionConfig cfg;
    cfg.epsilon = eps;
    const auto p = partition_from_classes(g, classes, cfg, false);
    const auto emb = key_lemma_embed(g, p, delta, tri, {0, 1, 2});
    if (!emb) continue;
    ++found;
    if (embedding_valid(g, tri, emb->map)) ++valid;
  }
  return {found >= kEmbedRequired && valid == found,
          std::to_string(found) + "/" + std::to_string(kEmbedSeeds) + " embeddings, " + std::to_string(valid) +
              " re-validated; delta=2/5 eps=1/50 eps0=" + to_string(eps0)};
}

Outcome partition_postcondition() {
  const BitGraph g = gen_random_graph(64, Rational(1, 2), 7).relation();
  PartitionConfig cfg;
  cfg.epsilon = Rational(3, 10);
  cfg.m0 = 4;
  const auto p = regularity_partition(g, cfg);
  std::size_t not_exact = 0;
  for (const auto& pr : p.pairs)
    if (!pr.verdict.exact) ++not_exact;
  const std::size_t k = p.k();
  const std::size_t bound = static_cast<std::size_t>(ceil_mul(cfg.epsilon, static_cast<std::int64_t>(k * k)));
  const std::size_t bad = p.irregular_count() + p.undecided_count();
  return {not_exact == 0 && bad <= bound && p.sizes_balanced(),
          "k=" + std::to_string(k) + ", non-regular=" + std::to_string(bad) + " <= " + std::to_string(bound) +
              ", sizes " + std::to_string(p.min_class_size()) + (p.sizes_balanced() ? " balanced" : " unbalanced") +
              ", inexact pairs=" + std::to_string(not_exact)};
}

Outcome ledger_reconciliation() {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < kLedgerGraphs; ++i) {
    const BitGraph g = gen_random_graph(256, Rational(1, 2), 600 + i).relation();
    PartitionConfig cfg;
    cfg.epsilon = Rational(1, 4);
    cfg.max_classes = 16;
    cfg.sampled_trials = 20;
    cfg.seed = i;
    const auto ledger = hierarchical_decomposition(g, cfg, 2);
    std::size_t sum = ledger.bottom_internal_omitted;
    for (const auto& l : ledger.levels) sum += l.interstitial_omitted;
    if (ledger.reconciles && sum == g.omitted_count()) ++ok;
  }
  return {ok == kLedgerGraphs, std::to_string(ok) + "/" + std::to_string(kLedgerGraphs) + " graphs reconcile exactly"};
}

Outcome charseq_invariants() {
  struct Case {
    std::string name;
    FiniteStructure s;
    FormulaSpec f;
    std::vector<Tuple> pool;
  };
  std::vector<Case> corpus;
  auto all_singletons = [](const FiniteStructure& s) {
    std::vector<std::size_t> v(s.universe_size);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return singletons(v);
  };
  auto h4 = gen_half_graph(4);
  corpus.push_back({"H4 edge", h4, builtin_formula("edge"), all_singletons(h4)});
  auto c6 = structure_from_graph(cycle_graph(6));
  corpus.push_back({"C6 edge", c6, builtin_formula("edge"), all_singletons(c6)});
  auto ip = gen_ip_array(3);
  {
    std::vector<std::size_t> params = ip.part("row0");
    params.insert(params.end(), ip.part("row1").begin(), ip.part("row1").end());
    corpus.push_back({"ip array edge", ip, builtin_formula("edge"), singletons(params)});
  }
  auto rg = gen_random_graph(10, Rational(1, 2), 11);
  corpus.push_back({"G(10,1/2) edge", rg, builtin_formula("edge"), all_singletons(rg)});
  auto tf = gen_tfrg_staged(2, 4);
  std::vector<Tuple> tf_pool;
  {
    std::vector<std::size_t> base = tf.part("X@1");
    base.push_back(tf.part("Y@1")[1]);
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = i + 1; j < base.size(); ++j) tf_pool.push_back({base[i], base[j]});
    tf_pool.push_back({base[0], base[0]});
    tf_pool.push_back({base[4], base[4]});
  }
  corpus.push_back({"tfrg common-neighbor", tf, builtin_formula("common-neighbor"), tf_pool});
  auto cc = gen_crosscutting(3, 3, 1, 5);
  {
    std::vector<Tuple> pool;
    for (auto a : cc.part("a_rows")) pool.push_back({a, cc.constant("0")});
    for (auto b : cc.part("b_cols")) pool.push_back({b, cc.constant("1")});
    corpus.push_back({"crosscut psi", cc, builtin_formula("crosscut-psi"), pool});
  }

  std::size_t tuples = 0, failures = 0;
  for (const auto& c : corpus) {
    if (c.pool.size() > 12) return {false, c.name + " pool exceeds 12 tuples"};
    const auto cs = compute_charseq(c.s, c.f, 4, c.pool);
    const auto rep = check_charseq_invariants(cs, 4);
    tuples += rep.tuples_checked;
    failures += rep.symmetry_failures + rep.closure_failures;
  }
  const auto tf_cs = compute_charseq(tf, builtin_formula("common-neighbor"), 4, tf_pool);
  bool tf_support = true;
  for (std::size_t n = 3; n <= 4; ++n) tf_support = tf_support && support_check(tf_cs, 2, n).holds;
  const auto c6_cs = compute_charseq(c6, builtin_formula("edge"), 4, all_singletons(c6));
  const auto c6_sup = support_check(c6_cs, 2, 3);
  bool c6_verified = false;
  if (!c6_sup.holds && c6_sup.counterexample) {
    std::vector<Tuple> args;
    for (auto i : *c6_sup.counterexample) args.push_back(c6_cs.tuple(i));
    bool pairs_ok = true;
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = i + 1; j < args.size(); ++j) {
        std::vector<Tuple> two{args[i], args[j]};
        pairs_ok = pairs_ok && naive_holds(c6, builtin_formula("edge"), two);
      }
    c6_verified = pairs_ok && !naive_holds(c6, builtin_formula("edge"), args);
  }
  return {failures == 0 && tf_support && c6_verified,
          std::to_string(tuples) + " tuples, " + std::to_string(failures) + " invariant failures; tfrg support 2 " +
              (tf_support ? "holds" : "fails") + "; C6 counterexample " +
              (c6_sup.counterexample ? ids(*c6_sup.counterexample) : "none") +
              (c6_verified ? " verified" : " unverified")};
}

Outcome order_dichotomy() {
  std::ostringstream out;
  bool ok = true;
  const Rational eps(3, 4);
  for (std::size_t k : {8, 16, 32}) {
    const auto h = gen_half_graph(k);
    const auto rows = density_spectrum(h.relation(), {k}, eps, 4, k, h.part("A"), h.part("B"));
    const Rational want(static_cast<std::int64_t>(k - 1), static_cast<std::int64_t>(2 * k));
    bool match = !rows.empty();
    for (const auto& r : rows) match = match && r.exact && r.density == want;
    ok = ok && match;
    out << "H" << k << ": " << rows.size() << " pair(s) at " << to_string(want) << (match ? "" : " MISMATCH") << "; ";
  }
  const auto kn = density_spectrum(complete_graph(24), {4, 8}, eps, 8, 1);
  bool only_one = !kn.empty();
  for (const auto& r : kn) only_one = only_one && r.density == Rational(1);
  ok = ok && only_one;
  out << "K24: " << kn.size() << " pairs, densities " << (only_one ? "all 1" : "not all 1");
  return {ok, out.str()};
}

Outcome cop_pipeline() {
  auto [alpha2, beta2] = cop_index_formulas(2);
  const bool formulas = alpha2[0] == std::pair<std::int64_t, std::int64_t>{1, 7} &&
                        alpha2[1] == std::pair<std::int64_t, std::int64_t>{3, 5} &&
                        beta2[0] == std::pair<std::int64_t, std::int64_t>{-2, 2} &&
                        beta2[1] == std::pair<std::int64_t, std::int64_t>{-4, 4};
  const std::size_t n = 3;
  const auto s = gen_threshold_chain(-6, 13);
  OrderedBase base{-6, s.part("chain"), s.part("chain")};
  const FormulaSpec rho = builtin_formula("strict-order-rho");
  const auto build = build_cop_from_ordered(s, rho, base, n);
  const auto cs = compute_charseq(s, rho, 2 * n, build.pool);
  const auto v = verify_cop(cs, build.fragment, n);
  return {formulas && v.holds && build.fragment.verified,
          std::string("index formulas ") + (formulas ? "match" : "differ") + "; verify_cop depth 3 " +
              (v.holds ? "passes" : "fails") + " over " + std::to_string(v.checked) + " selections"};
}

Outcome sop3_machinery() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = gen_tfrg_staged(2, 4);
  const BitGraph& r = s.relation();
  const auto parts = tfrg_parts(s);
  const ConfigTemplate g = ConfigTemplate::triangle();
  std::ostringstream out;

  bool literal = false;
  try {
    build_array(r, parts, g, 6);
    literal = true;
    out << "stage-2 array built; ";
  } catch (const PreconditionError& e) {
    out << "stage-2 literal: " << e.what() << "; ";
  }

  // Supplementary: the same parts, extended on demand by triangle-free elements.
  ArrayOptions opt;
  opt.extend = true;
  auto array = build_array(r, parts, g, 6, opt);
  const bool scan = verify_array(array, g).holds && array.relation.triangle_count() == 0;
  std::vector<Block> blocks;
  for (std::size_t l = 0; l < array.blocks(); ++l) blocks.push_back(array.block(l));
  const auto loops = pseudo_loop_search(blocks, g, array.relation, 2);
  const auto sop3 = sop3_from_array(array, g);
  const bool clean = scan && loops.status == SearchStatus::none && sop3.chain_ok && sop3.verdict.c1.holds &&
                     sop3.verdict.c3.holds;
  // Plant t above every block of A_1 and below every block of A_0: a realizer for (3) at i=0, j=1.
  BlockArray planted = array;
  const std::size_t n = array.n;
  std::vector<std::size_t> a0(n), a1(n);
  for (std::size_t b = 0; b < n; ++b) {
    a0[b] = b;
    a1[b] = n + 1 + b;
  }
  const Block t = plant_loop_block(planted, g, a1, a0);
  Sop3Options popt;
  popt.extra_objects = {t};
  const auto flipped = sop3_from_array(planted, g, popt);
  bool flip_ok = !flipped.verdict.c3.holds && flipped.c3_loop.has_value() && flipped.verdict.c3.x.has_value();
  if (flip_ok) {
    std::vector<Block> cands{Block(planted.h, std::vector<std::size_t>(n + 1))};
    for (std::size_t c = 0; c < flipped.verdict.c3.x->size(); ++c)
      cands[0][c / (n + 1)][c % (n + 1)] = (*flipped.verdict.c3.x)[c];
    for (auto l : {*flipped.verdict.c3.i, *flipped.verdict.c3.j})
      for (std::size_t b = 0; b < n; ++b) cands.push_back(planted.block(l * (n + 1) + b));
    flip_ok = loop_valid(*flipped.c3_loop, cands, g, planted.relation);
  }
  const double secs = seconds_since(t0);
  out << "supplementary with " << array.extended.size() << " extension elements: scan " << (scan ? "ok" : "FAILS")
      << ", loops " << to_string(loops.status) << ", (1) " << (sop3.verdict.c1.holds ? "pass" : "fail") << ", (3) "
      << (sop3.verdict.c3.holds ? "pass" : "fail") << ", planted loop flips (3) "
      << (flip_ok ? "with re-validated loop" : "NOT confirmed") << "; " << secs << " s";
  return {literal && clean && flip_ok && secs < kLoopSeconds, out.str()};
}

Outcome independence_depth_check() {
  const auto s = gen_tfrg_staged(2, 4);
  const BitGraph& r = s.relation();
  const auto parts = tfrg_parts(s);
  const auto d2 = independence_depth(r, parts, 2, 1);
  const auto d3 = independence_depth(r, parts, 3, 1);
  std::optional<Pattern> fail;
  for (const auto& c : d3.checks)
    if (!c.holds) {
      fail = c.edge_failure ? c.edge_failure : c.failure;
      // Concrete: no member of the part realizes it.
      std::vector<std::size_t> seq = fail->eta;
      seq.insert(seq.end(), fail->nu.begin(), fail->nu.end());
      std::vector<std::size_t> eta_idx(fail->eta.size()), nu_idx;
      for (std::size_t i = 0; i < eta_idx.size(); ++i) eta_idx[i] = i;
      for (std::size_t i = fail->eta.size(); i < seq.size(); ++i) nu_idx.push_back(i);
      if (pattern_realization(r, seq, eta_idx, nu_idx, parts[c.part].members)) return {false, "reported failure is realized"};
      break;
    }
  return {d2.holds && !d3.holds && fail.has_value(),
          std::string("k=2 ") + (d2.holds ? "passes" : "fails") + ", k=3 " + (d3.holds ? "passes" : "fails") +
              (fail ? " at eta=" + ids(fail->eta) + " nu=" + ids(fail->nu) : std::string()) + " (cap 1)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"alpha lower bound", alpha_lower_bound},
      {"Turan consistency", turan_consistency_sweep},
      {"eps0 arithmetic", eps0_arithmetic},
      {"Key Lemma embedding", key_lemma_embedding},
      {"regularity partition", partition_postcondition},
      {"hierarchical ledger", ledger_reconciliation},
      {"CharSeq invariants", charseq_invariants},
      {"order-property dichotomy", order_dichotomy},
      {"compatible-order pipeline", cop_pipeline},
      {"SOP3/loop machinery", sop3_machinery},
      {"independence depth", independence_depth_check},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
