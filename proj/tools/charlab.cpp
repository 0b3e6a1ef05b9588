// charlab: batch front-end. Exit 0 = computed, 2 = a check found a violation, 1 = error.
#include "charlab/charseq.hpp"
#include "charlab/counting.hpp"
#include "charlab/error.hpp"
#include "charlab/independence.hpp"
#include "charlab/orderprops.hpp"
#include "charlab/regularity.hpp"
#include "charlab/report.hpp"
#include "charlab/structure_io.hpp"
#include "charlab/structures.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace charlab;
using nlohmann::json;

namespace {

constexpr int kComputed = 0;
constexpr int kError = 1;
constexpr int kViolation = 2;

struct Config {
  std::uint64_t seed = 0;
  std::string structure = "random:32:1/2";
  std::string formula = "edge";
  std::string epsilon_text = "1/4", delta_text = "1/2";
  Rational epsilon{1, 4}, delta{1, 2};
  std::size_t n = 6, k = 3, depth = 2, cap = 1, m0 = 4;
  std::string out_dir = "charlab-out";
  std::vector<std::string> formats{"json"};
  unsigned threads = 1;

  // Subcommand-specific.
  std::string part_a, part_b, pool_part;
  std::string h_graph = "complete:3";
  std::string template_path;
  std::vector<std::size_t> sizes;
  std::size_t rows = 6, trials = 64, max_classes = 1024;
  bool extend = false, plant = false;

  json echo() const {
    return {{"structure", structure}, {"formula", formula}, {"epsilon", epsilon_text}, {"delta", delta_text},
            {"n", n},           {"k", k},           {"depth", depth},  {"cap", cap},   {"m0", m0},
            {"threads", threads}, {"part_a", part_a}, {"part_b", part_b}, {"pool_part", pool_part},
            {"h_graph", h_graph}, {"template", template_path}, {"sizes", sizes}, {"rows", rows},
            {"trials", trials}, {"max_classes", max_classes}, {"extend", extend}, {"plant", plant}};
  }
  bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::size_t to_count(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParameterError(what + ": expected a non-negative integer, got '" + s + "'");
  }
}

std::int64_t to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParameterError(what + ": expected an integer, got '" + s + "'");
  }
}

// kind:arg:... generator specs, or a path to a structure JSON file.
FiniteStructure make_structure(const std::string& spec, std::uint64_t seed) {
  if (spec.size() > 5 && spec.ends_with(".json")) return load_structure(spec);
  const auto f = split(spec, ':');
  const std::string& kind = f[0];
  auto need = [&](std::size_t args) {
    if (f.size() != args + 1)
      throw ParameterError("structure '" + spec + "': " + kind + " takes " + std::to_string(args) + " argument(s)");
  };
  if (kind == "random") {
    need(2);
    return gen_random_graph(to_count(f[1], "random size"), parse_rational(f[2]), seed);
  }
  if (kind == "tfrg") {
    need(2);
    return gen_tfrg_staged(to_count(f[1], "tfrg stages"), to_count(f[2], "tfrg subset cap"));
  }
  if (kind == "half") {
    need(1);
    return gen_half_graph(to_count(f[1], "half-graph k"));
  }
  if (kind == "ip") {
    need(1);
    return gen_ip_array(to_count(f[1], "array width"));
  }
  if (kind == "chain") {
    need(2);
    return gen_threshold_chain(to_int(f[1], "chain lo"), to_int(f[2], "chain hi"));
  }
  if (kind == "two-empty") {
    need(2);
    return gen_two_empty_order_chain(to_int(f[1], "chain lo"), to_int(f[2], "chain hi"));
  }
  if (kind == "crosscut") {
    need(3);
    return gen_crosscutting(to_count(f[1], "E classes"), to_count(f[2], "F classes"), to_count(f[3], "cell size"),
                            seed);
  }
  if (kind == "four-cycle-free") {
    need(0);
    return structure_from_graph(four_cycle_free_graph(seed));
  }
  if (kind == "multipartite") {
    if (f.size() < 2) throw ParameterError("structure '" + spec + "': multipartite needs part sizes");
    std::vector<std::size_t> sizes;
    for (std::size_t i = 1; i < f.size(); ++i) sizes.push_back(to_count(f[i], "part size"));
    return structure_from_graph(complete_multipartite(sizes));
  }
  need(1);
  const std::size_t n = to_count(f[1], kind + " size");
  if (kind == "empty") return structure_from_graph(empty_graph(n));
  if (kind == "complete") return structure_from_graph(complete_graph(n));
  if (kind == "cycle") return structure_from_graph(cycle_graph(n));
  if (kind == "star") return structure_from_graph(star_graph(n));
  if (kind == "paley") return structure_from_graph(paley_graph(n));
  throw ParameterError("unknown structure kind '" + kind +
                       "' (random, tfrg, half, ip, chain, two-empty, crosscut, four-cycle-free, multipartite, "
                       "empty, complete, cycle, star, paley, or a .json path)");
}

BitGraph make_small_graph(const std::string& spec) {
  const auto f = split(spec, ':');
  if (f.size() != 2) throw ParameterError("graph '" + spec + "': expected kind:size");
  const std::size_t n = to_count(f[1], "graph size");
  if (f[0] == "complete") return complete_graph(n);
  if (f[0] == "cycle") return cycle_graph(n);
  if (f[0] == "star") return star_graph(n);
  if (f[0] == "empty") return empty_graph(n);
  if (f[0] == "path") {
    BitGraph g(n);
    for (std::size_t v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
  }
  throw ParameterError("graph '" + spec + "': kind must be complete, cycle, star, empty or path");
}

std::string rat(const Rational& r) { return to_string(r); }

std::string join(const std::vector<std::size_t>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

// Collects the files of one run and writes them atomically at the end.
class Output {
 public:
  Output(const Config& cfg, std::string name) : cfg_(cfg), name_(std::move(name)) {
    report_ = report_envelope(name_, cfg.seed, cfg.echo());
  }
  json& report() { return report_; }
  void csv(const std::string& suffix, const CsvTable& table) {
    if (cfg_.wants("csv")) files_.emplace_back(stem() + suffix + ".csv", table.str());
  }
  void dot(const std::string& suffix, const std::string& text) {
    if (cfg_.wants("dot")) files_.emplace_back(stem() + suffix + ".dot", text);
  }
  void extra_json(const std::string& suffix, const json& j) {
    if (cfg_.wants("json")) files_.emplace_back(stem() + suffix + ".json", j.dump(2) + "\n");
  }
  int finish(int code) {
    report_["exit_code"] = code;
    if (cfg_.wants("json")) files_.emplace_back(stem() + ".json", report_.dump(2) + "\n");
    for (const auto& [path, content] : files_) write_file_atomic(path, content);
    return code;
  }

 private:
  std::string stem() const {
    std::string base = name_;
    std::replace(base.begin(), base.end(), ' ', '-');
    return (std::filesystem::path(cfg_.out_dir) / base).string();
  }
  const Config& cfg_;
  std::string name_;
  json report_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// --- gen / charseq ------------------------------------------------------------

int cmd_gen(const Config& cfg) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  Output out(cfg, "gen");
  out.report()["structure"] = structure_to_json(s);
  if (s.relations.count("R")) out.dot("", graph_to_dot(s.relation(), "R"));
  std::printf("structure: %zu elements, %zu relation(s), %zu part(s)\n", s.universe_size, s.relations.size(),
              s.parts.size());
  return out.finish(kComputed);
}

CharSeq build_charseq(const FiniteStructure& s, const Config& cfg, std::size_t level) {
  const FormulaSpec f = builtin_formula(cfg.formula);
  std::vector<Tuple> pool;
  if (!cfg.pool_part.empty()) {
    if (f.parameter_arity != 1) throw ParameterError("--pool-part needs a formula with one parameter variable");
    pool = singletons(s.part(cfg.pool_part));
  } else {
    pool = all_tuples(s.universe_size, f.parameter_arity);
  }
  return compute_charseq(s, f, level, std::move(pool), cfg.threads);
}

int cmd_charseq(const Config& cfg) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  const auto cs = build_charseq(s, cfg, cfg.depth);
  Output out(cfg, "charseq");
  json& r = out.report();
  r["charseq"] = cs.to_json();
  r["pool_size"] = cs.pool_size();
  int code = kComputed;
  if (cs.pool_size() <= 64) {
    const auto inv = check_charseq_invariants(cs, cfg.depth);
    r["invariants"] = {{"tuples_checked", inv.tuples_checked},
                       {"symmetry_failures", inv.symmetry_failures},
                       {"closure_failures", inv.closure_failures},
                       {"exact", true}};
    std::printf("invariants: %zu tuples, %zu symmetry failures, %zu closure failures\n", inv.tuples_checked,
                inv.symmetry_failures, inv.closure_failures);
    if (inv.symmetry_failures + inv.closure_failures) code = kViolation;
  } else {
    r["invariants"] = {{"skipped", "pool larger than 64 tuples"}};
  }
  if (cfg.k >= 1 && cfg.k <= cfg.depth && cfg.depth >= 2) {
    json sup = json::array();
    for (std::size_t n = cfg.k + 1; n <= cfg.depth; ++n) {
      const auto v = support_check(cs, cfg.k, n);
      json row = {{"n", n}, {"holds", v.holds}, {"checked", v.checked}, {"exact", true}};
      if (v.counterexample) row["counterexample"] = *v.counterexample;
      sup.push_back(row);
      std::printf("support %zu at n=%zu: %s\n", cfg.k, n, v.holds ? "holds" : "fails");
      if (!v.holds) code = kViolation;
    }
    r["support"] = {{"k", cfg.k}, {"levels", sup}};
  }
  out.dot("-p2", graph_to_dot(cs.p2_graph(), "P2"));
  return out.finish(code);
}

// --- reg ---------------------------------------------------------------------------

PartitionConfig partition_config(const Config& cfg) {
  PartitionConfig p;
  p.epsilon = cfg.epsilon;
  p.m0 = cfg.m0;
  p.seed = cfg.seed;
  p.max_classes = cfg.max_classes;
  p.exact.threads = cfg.threads;
  return p;
}

json pair_json(const PairReport& pr) {
  json j = {{"i", pr.i},
            {"j", pr.j},
            {"edges", pr.edges},
            {"density", rat(pr.verdict.density)},
            {"verdict", to_string(pr.verdict.verdict)},
            {"exact", pr.verdict.exact}};
  if (pr.verdict.witness)
    j["witness"] = {{"xs", pr.verdict.witness->xs}, {"ys", pr.verdict.witness->ys},
                    {"density", rat(pr.verdict.witness->density)}, {"gap", rat(pr.verdict.witness->gap)}};
  return j;
}

CsvTable pair_table(const RegularPartition& p) {
  CsvTable t({"i", "j", "density_num", "density_den", "verdict", "witness_x", "witness_y", "exact"});
  for (const auto& pr : p.pairs) {
    const auto& w = pr.verdict.witness;
    t.add({std::to_string(pr.i), std::to_string(pr.j), std::to_string(pr.verdict.density.numerator()),
           std::to_string(pr.verdict.density.denominator()), to_string(pr.verdict.verdict),
           w ? std::to_string(w->xs.size()) : "", w ? std::to_string(w->ys.size()) : "",
           pr.verdict.exact ? "1" : "0"});
  }
  return t;
}

json partition_json(const RegularPartition& p) {
  json pairs = json::array();
  for (const auto& pr : p.pairs) pairs.push_back(pair_json(pr));
  json hist = json::array();
  for (const auto& h : p.history)
    hist.push_back({{"classes", h.classes}, {"irregular", h.irregular}, {"undecided", h.undecided},
                    {"energy", h.energy}});
  return {{"k", p.k()},
          {"classes", p.classes},
          {"status", to_string(p.status)},
          {"irregular", p.irregular_count()},
          {"undecided", p.undecided_count()},
          {"sizes_balanced", p.sizes_balanced()},
          {"energy", p.energy()},
          {"history", hist},
          {"pairs", pairs}};
}

void print_partition(const RegularPartition& p) {
  std::size_t exact = 0;
  for (const auto& pr : p.pairs) exact += pr.verdict.exact;
  std::printf("partition: k=%zu, status %s, irregular %zu, undecided %zu, exact pairs %zu/%zu\n", p.k(),
              to_string(p.status).c_str(), p.irregular_count(), p.undecided_count(), exact, p.pairs.size());
}

int cmd_reg(const Config& cfg, const std::string& sub) {
  if (sub == "embed") {
    // Refuse before any partitioning work when epsilon exceeds the lemma's threshold.
    const BitGraph h = make_small_graph(cfg.h_graph);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < h.size(); ++v) max_deg = std::max(max_deg, h.degree(v));
    const Rational eps0 = key_lemma_eps0(cfg.delta, cfg.epsilon, max_deg);
    if (cfg.epsilon > eps0)
      throw PreconditionError("epsilon <= eps0 fails: epsilon=" + rat(cfg.epsilon) + " (" +
                              std::to_string(to_double(cfg.epsilon)) + ") > eps0=(delta-epsilon)^Delta/(2+Delta)=" +
                              rat(eps0) + " (" + std::to_string(to_double(eps0)) + ") with delta=" + rat(cfg.delta) +
                              ", Delta=" + std::to_string(max_deg));
  }
  const auto s = make_structure(cfg.structure, cfg.seed);
  const BitGraph& g = s.relation();
  Output out(cfg, "reg " + sub);
  json& r = out.report();

  if (sub == "spectrum") {
    auto sizes = cfg.sizes;
    if (sizes.empty()) sizes = {cfg.k};
    std::vector<std::size_t> a, b;
    if (!cfg.part_a.empty()) a = s.part(cfg.part_a);
    if (!cfg.part_b.empty()) b = s.part(cfg.part_b);
    ExactOptions ex;
    ex.threads = cfg.threads;
    const auto rows = density_spectrum(g, sizes, cfg.epsilon, cfg.trials, cfg.seed, a, b, ex);
    CsvTable t({"size", "density_num", "density_den", "exact", "xs", "ys"});
    json jr = json::array();
    for (const auto& row : rows) {
      t.add({std::to_string(row.size), std::to_string(row.density.numerator()),
             std::to_string(row.density.denominator()), row.exact ? "1" : "0", join(row.xs), join(row.ys)});
      jr.push_back({{"size", row.size}, {"density", rat(row.density)}, {"exact", row.exact}, {"xs", row.xs},
                    {"ys", row.ys}});
      std::printf("size %zu: density %s%s\n", row.size, rat(row.density).c_str(), row.exact ? " (exact)" : "");
    }
    if (rows.empty()) std::printf("no certified regular pairs\n");
    r["spectrum"] = jr;
    out.csv("", t);
    return out.finish(kComputed);
  }

  if (sub == "hier") {
    const auto ledger = hierarchical_decomposition(g, partition_config(cfg), cfg.depth);
    CsvTable t({"level", "components", "min_k", "max_k", "interstitial_omitted", "truncated"});
    json levels = json::array();
    for (const auto& l : ledger.levels) {
      t.add({std::to_string(l.level), std::to_string(l.components), std::to_string(l.min_k),
             std::to_string(l.max_k), std::to_string(l.interstitial_omitted), std::to_string(l.truncated)});
      levels.push_back({{"level", l.level}, {"components", l.components}, {"min_k", l.min_k}, {"max_k", l.max_k},
                        {"interstitial_omitted", l.interstitial_omitted}, {"truncated", l.truncated}});
      std::printf("level %zu: %zu components, %zu interstitial omissions\n", l.level, l.components,
                  l.interstitial_omitted);
    }
    r["ledger"] = {{"levels", levels},
                   {"bottom_internal_omitted", ledger.bottom_internal_omitted},
                   {"total_omitted", ledger.total_omitted},
                   {"reconciles", ledger.reconciles},
                   {"telescoped_bound", ledger.telescoped_bound},
                   {"c", rat(ledger.c)},
                   {"exact", true}};
    std::printf("bottom internal %zu, total %zu: %s\n", ledger.bottom_internal_omitted, ledger.total_omitted,
                ledger.reconciles ? "reconciles" : "DOES NOT reconcile");
    out.csv("", t);
    return out.finish(ledger.reconciles ? kComputed : kViolation);
  }

  const auto p = regularity_partition(g, partition_config(cfg));
  print_partition(p);
  r["partition"] = partition_json(p);
  out.csv("-pairs", pair_table(p));

  if (sub == "partition") return out.finish(kComputed);

  if (sub == "reduced") {
    const auto red = reduced_graph(p, cfg.delta);
    r["reduced"] = {{"vertices", red.graph.size()}, {"edges", red.graph.edges().size()}, {"class_sizes", red.class_sizes}};
    std::printf("reduced graph: %zu vertices, %zu edges\n", red.graph.size(), red.graph.edges().size());
    out.dot("-reduced", graph_to_dot(red.graph, "reduced"));
    return out.finish(kComputed);
  }

  if (sub == "embed") {
    const BitGraph h = make_small_graph(cfg.h_graph);
    // H-vertex v goes to class v mod k.
    std::vector<std::size_t> assign(h.size());
    for (std::size_t v = 0; v < h.size(); ++v) assign[v] = v % std::max<std::size_t>(p.k(), 1);
    const auto emb = key_lemma_embed(g, p, cfg.delta, h, assign);
    if (!emb) {
      r["embedding"] = nullptr;
      std::printf("embedding: not found\n");
      return out.finish(kComputed);
    }
    const bool valid = embedding_valid(g, h, emb->map);
    r["embedding"] = {{"map", emb->map}, {"valid", valid}, {"max_degree", emb->max_degree},
                      {"blow_up_height", emb->blow_up_height}, {"candidate_sizes", emb->candidate_sizes}};
    std::printf("embedding: %s (%s)\n", join(emb->map).c_str(), valid ? "valid" : "INVALID");
    return out.finish(valid ? kComputed : kViolation);
  }
  throw ParameterError("unknown reg subcommand '" + sub + "'");
}

// --- alpha -------------------------------------------------------------------------

int cmd_alpha(const Config& cfg) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  BitGraph g;
  std::string source = "relation R";
  if (cfg.formula != "edge" || !cfg.pool_part.empty()) {
    g = build_charseq(s, cfg, 2).p2_graph();
    source = "P_2 graph of " + cfg.formula;
  } else {
    g = s.relation();
  }
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= std::min(cfg.n, g.size()); ++n) ns.push_back(n);
  CountingBudget budget;
  budget.threads = cfg.threads;
  const auto prof = omission_profile(g, ns, cfg.k, budget, cfg.seed);
  CsvTable t({"n", "alpha", "exact_flag", "turan_upper_k", "floor_half", "witness"});
  json rows = json::array();
  for (const auto& row : prof.rows) {
    t.add({std::to_string(row.n), std::to_string(row.alpha.value), row.alpha.exact ? "1" : "0",
           rat(row.turan_upper), std::to_string(row.floor_half), join(row.alpha.witness)});
    rows.push_back({{"n", row.n}, {"alpha", row.alpha.value}, {"exact", row.alpha.exact},
                    {"turan_upper", rat(row.turan_upper)}, {"floor_half", row.floor_half},
                    {"witness", row.alpha.witness}});
    std::printf("n=%zu: %zu <= alpha=%zu%s <= %s\n", row.n, row.floor_half, row.alpha.value,
                row.alpha.exact ? " (exact)" : " (lower bound)", rat(row.turan_upper).c_str());
  }
  Output out(cfg, "alpha");
  out.report()["graph"] = source;
  out.report()["k"] = prof.k;
  out.report()["rows"] = rows;
  out.report()["monotone"] = prof.monotone;
  // The upper bound only binds when the relation has no empty graph of size k.
  const auto me = max_empty_graph(g, budget);
  const bool applies = me.exact && me.size < prof.k;
  std::printf("turan bound %s: max empty graph %s%zu, k=%zu\n", applies ? "applies" : "not applicable",
              me.exact ? "" : ">= ", me.size, prof.k);
  out.report()["max_empty_graph"] = {{"size", me.size}, {"exact", me.exact}};
  out.report()["turan_applicable"] = applies;
  out.csv("", t);
  return out.finish(kComputed);
}

// --- order -------------------------------------------------------------------------

json verdict_json(const OrderVerdict& v) {
  json j = {{"holds", v.holds},       {"vacuous", v.vacuous}, {"expected", v.expected},
            {"observed", v.observed}, {"checked", v.checked}, {"detail", v.detail},
            {"used_support2", v.used_support2}, {"exact", true}};
  if (v.violation) j["violation"] = {{"a", v.violation->a}, {"b", v.violation->b}};
  return j;
}

json condition_json(const ConditionVerdict& c) {
  json j = {{"holds", c.holds}, {"checked", c.checked}, {"detail", c.detail}, {"failures", c.failures}};
  if (c.i) j["i"] = *c.i;
  if (c.j) j["j"] = *c.j;
  if (c.x) j["x"] = *c.x;
  return j;
}

void print_sop3_table(const Sop3Verdict& v) {
  std::printf("condition  verdict   detail\n");
  const ConditionVerdict* cs[3] = {&v.c1, &v.c2, &v.c3};
  for (int i = 0; i < 3; ++i)
    std::printf("(%d)        %-9s %s\n", i + 1, !cs[i]->checked ? "unchecked" : cs[i]->holds ? "pass" : "FAIL",
                cs[i]->detail.c_str());
}

CopBuild chain_cop(const FiniteStructure& s, const Config& cfg) {
  if (!s.parts.count("chain")) throw ParameterError("order cop needs a structure with a 'chain' part (chain:LO:HI)");
  const auto& chain = s.part("chain");
  const auto lo = -2 * static_cast<std::int64_t>(cfg.n);
  if (chain.size() < 6 * cfg.n)
    throw ParameterError("order cop: the chain must cover [-2n, 4n-1], i.e. chain:" + std::to_string(lo) + ":" +
                         std::to_string(4 * cfg.n - 1) + " or longer");
  OrderedBase base{lo, chain, chain};
  return build_cop_from_ordered(s, builtin_formula("strict-order-rho"), base, cfg.n);
}

int cmd_order(const Config& cfg, const std::string& sub) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  Output out(cfg, "order " + sub);
  json& r = out.report();

  if (sub == "half") {
    HalfGraphOptions opt;
    opt.seed = cfg.seed;
    if (!cfg.part_a.empty()) opt.a_domain = s.part(cfg.part_a);
    if (!cfg.part_b.empty()) opt.b_domain = s.part(cfg.part_b);
    const auto res = find_half_graph(s.relation(), cfg.k, opt);
    r["status"] = to_string(res.status);
    r["exact"] = res.exact;
    r["fragment"] = fragment_json("half", res.fragment.a, res.fragment.b, cfg.k, res.fragment.verified);
    std::printf("half-graph of length %zu: %s%s\n", cfg.k, to_string(res.status).c_str(),
                res.exact ? " (exact)" : "");
    if (res.status == SearchStatus::found)
      std::printf("a = %s\nb = %s\n", join(res.fragment.a).c_str(), join(res.fragment.b).c_str());
    return out.finish(kComputed);
  }

  if (sub == "cop" || sub == "sop3") {
    const auto build = chain_cop(s, cfg);
    const auto cs = compute_charseq(s, builtin_formula("strict-order-rho"), 2 * cfg.n, build.pool, cfg.threads);
    const auto& frag = build.fragment;
    r["fragment"] = fragment_json("cop", frag.alpha, frag.beta, frag.depth, frag.verified);
    r["alpha_index"] = build.alpha_index;
    r["beta_index"] = build.beta_index;
    if (sub == "cop") {
      const auto v = verify_cop(cs, frag, cfg.n);
      r["verdict"] = verdict_json(v);
      std::printf("c.o.p. fragment depth %zu: %s (%zu selections)\n", cfg.n, v.holds ? "verified" : "FAILS",
                  v.checked);
      if (!v.holds) std::printf("%s\n", v.detail.c_str());
      return out.finish(v.holds ? kComputed : kViolation);
    }
    const auto res = cop_to_sop3(cs, frag, cfg.n);
    r["sop3"] = {{"c1", condition_json(res.verdict.c1)}, {"c2", condition_json(res.verdict.c2)},
                 {"c3", condition_json(res.verdict.c3)}, {"note", res.verdict.note},
                 {"blocks", res.blocks}, {"witnesses", res.witnesses}};
    print_sop3_table(res.verdict);
    return out.finish(res.verdict.all() ? kComputed : kViolation);
  }

  if (sub == "empty-op") {
    if (cfg.part_a.empty() || cfg.part_b.empty()) throw ParameterError("order empty-op needs --part-a and --part-b");
    const auto& a = s.part(cfg.part_a);
    const auto& b = s.part(cfg.part_b);
    const FormulaSpec f = builtin_formula(cfg.formula);
    // One parameter: the elements themselves. Two: (a_i, 0) and (b_j, 1) with the structure's constants.
    std::vector<Tuple> pool;
    if (f.parameter_arity == 1) {
      for (auto e : a) pool.push_back({e});
      for (auto e : b) pool.push_back({e});
    } else if (f.parameter_arity == 2 && s.constants.count("0") && s.constants.count("1")) {
      for (auto e : a) pool.push_back({e, s.constant("0")});
      for (auto e : b) pool.push_back({e, s.constant("1")});
    } else {
      throw ParameterError("order empty-op: formula needs one parameter, or two with constants 0 and 1");
    }
    const auto cs = compute_charseq(s, f, std::max<std::size_t>(cfg.n, 2), pool, cfg.threads);
    std::vector<std::size_t> ai(a.size()), bi(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ai[i] = i;
    for (std::size_t i = 0; i < b.size(); ++i) bi[i] = a.size() + i;
    const auto v = verify_empty_op(cs, ai, bi, cfg.n);
    r["fragment"] = fragment_json("empty-op", a, b, cfg.n, v.holds);
    r["verdict"] = verdict_json(v);
    std::printf("empty o.p. at n=%zu: %s%s\n", cfg.n, v.holds ? "holds" : "FAILS", v.vacuous ? " (vacuous)" : "");
    if (!v.holds) std::printf("%s\n", v.detail.c_str());
    return out.finish(v.holds ? kComputed : kViolation);
  }
  throw ParameterError("unknown order subcommand '" + sub + "'");
}

// --- indep -------------------------------------------------------------------------

ConfigTemplate load_template(const Config& cfg) {
  if (cfg.template_path.empty()) return ConfigTemplate::triangle();
  std::ifstream in(cfg.template_path);
  if (!in) throw FormatError("cannot read template " + cfg.template_path);
  try {
    return ConfigTemplate::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw FormatError("template " + cfg.template_path + ": " + e.what());
  }
}

json depth_json(const DepthReport& d) {
  json checks = json::array();
  for (const auto& c : d.checks) {
    json j = {{"part", c.part}, {"others", c.others}, {"holds", c.holds}, {"patterns", c.patterns},
              {"failures", c.failures}};
    if (c.failure) j["failure"] = {{"eta", c.failure->eta}, {"nu", c.failure->nu}};
    if (c.edge_failure) j["edge_failure"] = {{"eta", c.edge_failure->eta}, {"nu", c.edge_failure->nu}};
    checks.push_back(j);
  }
  return {{"k", d.k}, {"cap", d.cap}, {"holds", d.holds}, {"exact", true}, {"checks", checks}};
}

int cmd_indep(const Config& cfg, const std::string& sub) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  const auto parts = tfrg_parts(s);
  Output out(cfg, "indep " + sub);
  json& r = out.report();

  if (sub == "depth") {
    const auto d = independence_depth(s.relation(), parts, cfg.k, cfg.cap, cfg.threads);
    r["depth"] = depth_json(d);
    std::printf("independence depth k=%zu cap=%zu: %s\n", cfg.k, cfg.cap, d.holds ? "holds" : "fails");
    for (const auto& c : d.checks)
      if (!c.holds) {
        const auto& f = c.edge_failure ? *c.edge_failure : *c.failure;
        std::printf("part %s: unrealized eta={%s} nu={%s}\n", parts[c.part].label.c_str(), join(f.eta, ',').c_str(),
                    join(f.nu, ',').c_str());
        break;
      }
    return out.finish(d.holds ? kComputed : kViolation);
  }

  const ConfigTemplate g = load_template(cfg);
  ArrayOptions opt;
  opt.extend = cfg.extend;
  auto array = build_array(s.relation(), parts, g, cfg.rows, opt);
  const auto scan = verify_array(array, g);
  r["array"] = array_json(array);
  r["template"] = g.to_json();
  r["scan"] = {{"holds", scan.holds}, {"pairs", scan.pairs}};
  std::printf("array: %zu rows, %zu blocks, %zu extension elements, scan %s\n", array.rows.size(), array.blocks(),
              array.extended.size(), scan.holds ? "ok" : "FAILS");
  if (sub == "array") return out.finish(scan.holds ? kComputed : kViolation);

  std::vector<Block> blocks;
  for (std::size_t l = 0; l < array.blocks(); ++l) blocks.push_back(array.block(l));

  if (sub == "loops") {
    const auto ls = pseudo_loop_search(blocks, g, array.relation, g.n());
    r["loops"] = {{"status", to_string(ls.status)}, {"nodes", ls.nodes}, {"exact", ls.status != SearchStatus::not_found}};
    if (ls.loop) {
      r["loops"]["loop"] = loop_json(*ls.loop, blocks);
      std::printf("loops: found (m=%zu, blocks %s)\n", ls.loop->m, join(ls.loop->blocks).c_str());
      return out.finish(kViolation);
    }
    std::printf("loops: %s\n", to_string(ls.status).c_str());
    return out.finish(kComputed);
  }

  if (sub == "sop3") {
    Sop3Options sopt;
    if (cfg.plant) {
      // A block above A_1 and below A_0: a realizer for condition (3).
      const std::size_t n = array.n;
      if (array.blocks() < 2 * n + 1) throw ParameterError("--plant needs at least 2n+1 blocks");
      std::vector<std::size_t> a0(n), a1(n);
      for (std::size_t b = 0; b < n; ++b) {
        a0[b] = b;
        a1[b] = n + 1 + b;
      }
      sopt.extra_objects.push_back(plant_loop_block(array, g, a1, a0));
    }
    const auto res = sop3_from_array(array, g, sopt);
    json j = {{"chain_ok", res.chain_ok},
              {"degenerate", res.degenerate},
              {"witness_source", res.witness_source},
              {"domain", res.domain_note},
              {"c1", condition_json(res.verdict.c1)},
              {"c2", condition_json(res.verdict.c2)},
              {"c3", condition_json(res.verdict.c3)},
              {"note", res.verdict.note}};
    if (res.chain_failure) j["chain_failure"] = {res.chain_failure->first, res.chain_failure->second};
    if (res.c1_loop) j["c1_loop"] = {{"m", res.c1_loop->m}, {"blocks", res.c1_loop->blocks}};
    if (res.c3_loop) j["c3_loop"] = {{"m", res.c3_loop->m}, {"blocks", res.c3_loop->blocks}};
    r["sop3"] = j;
    if (!res.chain_ok) {
      std::printf("blocks are not a <_l chain (%zu, %zu)\n", res.chain_failure->first, res.chain_failure->second);
      return out.finish(kViolation);
    }
    print_sop3_table(res.verdict);
    if (res.c3_loop) std::printf("condition (3) failure certified by a pseudo-loop (m=%zu)\n", res.c3_loop->m);
    const bool ok = res.verdict.c1.holds && res.verdict.c3.holds;
    return out.finish(ok ? kComputed : kViolation);
  }
  throw ParameterError("unknown indep subcommand '" + sub + "'");
}

// --- report ------------------------------------------------------------------------

int cmd_report(const Config& cfg) {
  const auto s = make_structure(cfg.structure, cfg.seed);
  const BitGraph& g = s.relation();
  Output out(cfg, "report");
  json& r = out.report();
  r["structure"] = structure_to_json(s);
  out.dot("-graph", graph_to_dot(g, "R"));

  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= std::min(cfg.n, g.size()); ++n) ns.push_back(n);
  CountingBudget budget;
  budget.threads = cfg.threads;
  const auto prof = omission_profile(g, ns, cfg.k, budget, cfg.seed);
  CsvTable alpha({"n", "alpha", "exact_flag", "turan_upper_k", "floor_half", "witness"});
  json rows = json::array();
  for (const auto& row : prof.rows) {
    alpha.add({std::to_string(row.n), std::to_string(row.alpha.value), row.alpha.exact ? "1" : "0",
               rat(row.turan_upper), std::to_string(row.floor_half), join(row.alpha.witness)});
    rows.push_back({{"n", row.n}, {"alpha", row.alpha.value}, {"exact", row.alpha.exact}});
  }
  r["alpha"] = rows;
  out.csv("-alpha", alpha);

  const auto p = regularity_partition(g, partition_config(cfg));
  r["partition"] = partition_json(p);
  out.csv("-pairs", pair_table(p));
  const auto red = reduced_graph(p, cfg.delta);
  out.dot("-reduced", graph_to_dot(red.graph, "reduced"));
  print_partition(p);
  std::printf("reduced graph: %zu vertices, %zu edges\n", red.graph.size(), red.graph.edges().size());
  return out.finish(kComputed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charlab: characteristic sequences, regularity and order properties on finite structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.set_version_flag("--version", std::string(kVersion));
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("-s,--structure", cfg.structure, "generator spec (kind:args) or structure .json")
      ->capture_default_str();
  app.add_option("--formula", cfg.formula, "builtin formula")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon_text, "regularity epsilon (rational or decimal)")->capture_default_str();
  app.add_option("--delta", cfg.delta_text, "density threshold delta")->capture_default_str();
  app.add_option("--n", cfg.n, "level / length n")->capture_default_str();
  app.add_option("--k", cfg.k, "k")->capture_default_str();
  app.add_option("--depth", cfg.depth, "depth / max level")->capture_default_str();
  app.add_option("--cap", cfg.cap, "per-part pattern cap")->capture_default_str();
  app.add_option("--m0", cfg.m0, "initial class count")->capture_default_str();
  app.add_option("--max-classes", cfg.max_classes, "refinement class limit")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "report directory")->capture_default_str();
  app.add_option("--format", cfg.formats, "report formats")
      ->check(CLI::IsMember({"csv", "json", "dot"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();

  auto* gen = app.add_subcommand("gen", "generate a structure");
  auto* charseq = app.add_subcommand("charseq", "characteristic sequence of a formula");
  charseq->add_option("--pool-part", cfg.pool_part, "parameters: singletons of this part");
  auto* reg = app.add_subcommand("reg", "regularity pipeline");
  reg->require_subcommand(1);
  reg->fallthrough();
  std::string sub;
  for (const char* name : {"partition", "reduced", "embed", "spectrum", "hier"}) {
    auto* c = reg->add_subcommand(name);
    c->callback([&sub, name] { sub = name; });
  }
  reg->get_subcommand("embed")->add_option("--graph-h", cfg.h_graph, "H to embed (complete|cycle|path|star:size)");
  auto* spectrum = reg->get_subcommand("spectrum");
  spectrum->add_option("--sizes", cfg.sizes, "pair sizes");
  spectrum->add_option("--trials", cfg.trials, "random pairs per size");
  spectrum->add_option("--part-a", cfg.part_a, "X side part");
  spectrum->add_option("--part-b", cfg.part_b, "Y side part");
  auto* alpha = app.add_subcommand("alpha", "omission counts alpha(n) with the Turan sandwich");
  alpha->add_option("--pool-part", cfg.pool_part, "read alpha off the P_2 graph over this part");
  auto* order = app.add_subcommand("order", "order-property checks");
  order->require_subcommand(1);
  order->fallthrough();
  for (const char* name : {"half", "cop", "empty-op", "sop3"}) {
    auto* c = order->add_subcommand(name);
    c->callback([&sub, name] { sub = name; });
    c->add_option("--part-a", cfg.part_a, "a-row part");
    c->add_option("--part-b", cfg.part_b, "b-row part");
  }
  auto* indep = app.add_subcommand("indep", "independence and helix arrays");
  indep->require_subcommand(1);
  indep->fallthrough();
  for (const char* name : {"depth", "array", "loops", "sop3"}) {
    auto* c = indep->add_subcommand(name);
    c->callback([&sub, name] { sub = name; });
    if (std::string(name) != "depth") {
      c->add_option("--template", cfg.template_path, "template JSON (default: triangle)");
      c->add_option("--rows", cfg.rows, "array rows");
      c->add_flag("--extend", cfg.extend, "extend the parts with fresh triangle-free elements when needed");
    }
  }
  indep->get_subcommand("sop3")->add_flag("--plant", cfg.plant, "plant a synthetic loop block");
  auto* report = app.add_subcommand("report", "bundle of structure, alpha, partition and reduced graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kComputed : kError;
  }

  try {
    cfg.epsilon = parse_rational(cfg.epsilon_text);
    cfg.delta = parse_rational(cfg.delta_text);
    if (cfg.epsilon <= 0 || cfg.epsilon >= 1) throw ParameterError("0 < epsilon < 1 fails: epsilon=" + cfg.epsilon_text);
    if (cfg.delta <= 0 || cfg.delta > 1) throw ParameterError("0 < delta <= 1 fails: delta=" + cfg.delta_text);
    if (cfg.m0 < 1) throw ParameterError("m0 >= 1 fails");
    if (cfg.cap < 1) throw ParameterError("cap >= 1 fails");
    if (cfg.k < 1) throw ParameterError("k >= 1 fails");

    if (gen->parsed()) return cmd_gen(cfg);
    if (charseq->parsed()) return cmd_charseq(cfg);
    if (reg->parsed()) return cmd_reg(cfg, sub);
    if (alpha->parsed()) return cmd_alpha(cfg);
    if (order->parsed()) return cmd_order(cfg, sub);
    if (indep->parsed()) return cmd_indep(cfg, sub);
    if (report->parsed()) return cmd_report(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
