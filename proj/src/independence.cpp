#include "charlab/independence.hpp"

#include "charlab/error.hpp"
#include "charlab/parallel.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace charlab {

namespace {

std::string ids(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

bool has_internal_edge(const BitGraph& r, const std::vector<std::size_t>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (r.has_edge(xs[i], xs[j])) return true;
  return false;
}

// Disjoint (eta, nu) over pool with |eta| + |nu| <= cap, smallest first.
std::vector<Pattern> local_patterns(const std::vector<std::size_t>& pool, std::size_t cap) {
  std::vector<Pattern> out;
  for (std::size_t size = 0; size <= std::min(cap, pool.size()); ++size)
    for_each_combination(pool.size(), size, [&](const std::vector<std::size_t>& c) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << size); ++mask) {
        Pattern p;
        for (std::size_t t = 0; t < size; ++t) ((mask >> t) & 1 ? p.eta : p.nu).push_back(pool[c[t]]);
        out.push_back(std::move(p));
      }
      return true;
    });
  return out;
}

Bitset realizers_in(const BitGraph& r, const Bitset& witnesses, const Pattern& p) {
  Bitset cand = witnesses;
  for (auto e : p.eta) cand &= r.neighbors(e);
  for (auto e : p.nu) cand.and_not(r.neighbors(e));
  for (auto e : p.eta) cand.reset(e);
  for (auto e : p.nu) cand.reset(e);
  return cand;
}

std::vector<std::size_t> flatten(const Block& b) {
  std::vector<std::size_t> out;
  for (const auto& row : b) out.insert(out.end(), row.begin(), row.end());
  return out;
}

Block unflatten(std::span<const std::size_t> flat, std::size_t h, std::size_t width) {
  Block b(h, std::vector<std::size_t>(width));
  for (std::size_t t = 0; t < h; ++t)
    for (std::size_t i = 0; i < width; ++i) b[t][i] = flat[t * width + i];
  return b;
}

void check_shape(const Block& b, const ConfigTemplate& g) {
  if (b.size() != g.h()) throw ParameterError("block height " + std::to_string(b.size()) + " != template height");
  for (const auto& row : b)
    if (row.size() != g.n() + 1) throw ParameterError("block width does not match the template");
}

}  // namespace

// --- independence depth -------------------------------------------------

std::vector<IndependencePart> tfrg_parts(const FiniteStructure& s) {
  std::size_t last = 0;
  while (s.parts.count("X@" + std::to_string(last + 1))) ++last;
  std::vector<IndependencePart> out;
  for (const char* name : {"X", "Y", "Z"}) {
    IndependencePart p;
    p.label = name;
    p.members = s.part(name);
    if (last > 0) p.core = s.part(std::string(name) + "@" + std::to_string(last - 1));
    out.push_back(std::move(p));
  }
  return out;
}

DepthReport independence_depth(const BitGraph& r, const std::vector<IndependencePart>& parts, std::size_t k,
                               std::size_t cap, unsigned threads) {
  if (cap < 1) throw ParameterError("pattern cap must be at least 1");
  if (k < 1) throw ParameterError("depth k must be at least 1");
  {
    Bitset seen(r.size());
    for (const auto& p : parts)
      for (auto v : p.members) {
        if (v >= r.size()) throw ParameterError("part " + p.label + " has an element outside the relation");
        if (seen.test(v)) throw ParameterError("parts must be disjoint (element " + std::to_string(v) + ")");
        seen.set(v);
      }
  }
  DepthReport report;
  report.k = k;
  report.cap = cap;
  report.label = "up to pattern size " + std::to_string(cap) + " per other part";
  if (k > parts.size()) {
    report.holds = false;
    report.label += "; fewer than k parts";
    return report;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (j != i) others.push_back(j);
    for_each_combination(others.size(), k - 1, [&](const std::vector<std::size_t>& c) {
      DepthCheck check;
      check.part = i;
      for (auto x : c) check.others.push_back(others[x]);
      report.checks.push_back(std::move(check));
      return true;
    });
  }
  std::vector<std::vector<Pattern>> local(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) local[i] = local_patterns(parts[i].pattern_pool(), cap);

  parallel_for(report.checks.size(), threads, [&](std::size_t idx) {
    DepthCheck& check = report.checks[idx];
    const Bitset witnesses = Bitset::of(r.size(), parts[check.part].members);
    std::vector<std::size_t> choice(check.others.size(), 0);
    while (true) {
      Pattern p;
      for (std::size_t t = 0; t < choice.size(); ++t) {
        const Pattern& l = local[check.others[t]][choice[t]];
        p.eta.insert(p.eta.end(), l.eta.begin(), l.eta.end());
        p.nu.insert(p.nu.end(), l.nu.begin(), l.nu.end());
      }
      ++check.patterns;
      if (realizers_in(r, witnesses, p).none()) {
        check.holds = false;
        ++check.failures;
        if (!check.edge_failure && has_internal_edge(r, p.eta)) check.edge_failure = p;
        if (!check.failure) check.failure = std::move(p);
      }
      std::size_t t = 0;
      while (t < choice.size() && ++choice[t] == local[check.others[t]].size()) choice[t++] = 0;
      if (t == choice.size()) break;
    }
  });
  for (const auto& c : report.checks) report.holds = report.holds && c.holds;
  return report;
}

DepthProfile independence_profile(const BitGraph& r, const std::vector<IndependencePart>& parts, std::size_t cap,
                                  unsigned threads) {
  DepthProfile prof;
  prof.cap = cap;
  prof.label = "up to pattern size " + std::to_string(cap) + " per other part";
  bool passing = true;
  for (std::size_t k = 1; k <= parts.size(); ++k) {
    const bool ok = independence_depth(r, parts, k, cap, threads).holds;
    prof.by_k.emplace_back(k, ok);
    if (ok && passing) prof.max_k = k;
    passing = passing && ok;
  }
  return prof;
}

// --- templates ------------------------------------------------------------

ConfigTemplate::ConfigTemplate(std::size_t h, std::size_t n) : h_(h), n_(n), e_(h * (n + 1) * h * (n + 1), 0) {
  if (h < 1 || n < 1) throw ParameterError("template needs h >= 1 and n >= 1");
}

ConfigTemplate ConfigTemplate::uniform(std::size_t h, std::size_t n, bool value) {
  ConfigTemplate g(h, n);
  for (auto [u, v] : g.cross_pairs()) {
    g.e_[u * g.vertices() + v] = value;
    g.e_[v * g.vertices() + u] = value;
  }
  return g;
}

ConfigTemplate ConfigTemplate::from_mask(std::size_t h, std::size_t n, std::uint64_t mask) {
  ConfigTemplate g(h, n);
  const auto pairs = g.cross_pairs();
  for (std::size_t p = 0; p < pairs.size() && p < 64; ++p) {
    const bool value = (mask >> p) & 1;
    g.e_[pairs[p].first * g.vertices() + pairs[p].second] = value;
    g.e_[pairs[p].second * g.vertices() + pairs[p].first] = value;
  }
  return g;
}

bool ConfigTemplate::edge(std::size_t t, std::size_t i, std::size_t t2, std::size_t i2) const {
  if (i == i2) throw ParameterError("template is agnostic on same-column pairs");
  return e_[vertex(t, i) * vertices() + vertex(t2, i2)];
}

void ConfigTemplate::set_edge(std::size_t t, std::size_t i, std::size_t t2, std::size_t i2, bool value) {
  if (i == i2) throw ParameterError("template is agnostic on same-column pairs");
  e_[vertex(t, i) * vertices() + vertex(t2, i2)] = value;
  e_[vertex(t2, i2) * vertices() + vertex(t, i)] = value;
}

std::vector<std::pair<std::size_t, std::size_t>> ConfigTemplate::cross_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < vertices(); ++u)
    for (std::size_t v = u + 1; v < vertices(); ++v)
      if (u % (n_ + 1) != v % (n_ + 1)) out.emplace_back(u, v);
  return out;
}

nlohmann::json ConfigTemplate::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : cross_pairs())
    if (e_[u * vertices() + v])
      edges.push_back({{u / (n_ + 1), u % (n_ + 1)}, {v / (n_ + 1), v % (n_ + 1)}});
  return {{"h", h_}, {"n", n_}, {"edges", edges}};
}

ConfigTemplate ConfigTemplate::from_json(const nlohmann::json& j) {
  try {
    ConfigTemplate g(j.at("h").get<std::size_t>(), j.at("n").get<std::size_t>());
    for (const auto& e : j.at("edges")) {
      const auto t = e.at(0).at(0).get<std::size_t>(), i = e.at(0).at(1).get<std::size_t>();
      const auto t2 = e.at(1).at(0).get<std::size_t>(), i2 = e.at(1).at(1).get<std::size_t>();
      if (t >= g.h_ || t2 >= g.h_ || i > g.n_ || i2 > g.n_) throw FormatError("template edge out of range");
      if (i == i2) throw FormatError("template edge inside one column");
      g.set_edge(t, i, t2, i2, true);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("template JSON: ") + e.what());
  }
}

std::optional<std::vector<std::size_t>> realize_template(const BitGraph& r, const ConfigTemplate& g,
                                                         std::size_t node_budget) {
  const std::size_t V = g.vertices(), width = g.n() + 1;
  std::vector<std::size_t> assign;
  Bitset used(r.size());
  std::size_t nodes = 0;
  std::function<bool()> dfs = [&]() -> bool {
    const std::size_t v = assign.size();
    if (v == V) return true;
    if (++nodes > node_budget) throw BudgetError("template embedding search exceeded its node budget");
    Bitset cand = Bitset::full(r.size());
    cand.and_not(used);
    for (std::size_t u = 0; u < v; ++u) {
      if (u % width == v % width) continue;
      if (g.edge(u / width, u % width, v / width, v % width))
        cand &= r.neighbors(assign[u]);
      else
        cand.and_not(r.neighbors(assign[u]));
    }
    for (std::size_t x = cand.first(); x != Bitset::npos; x = cand.next(x + 1)) {
      assign.push_back(x);
      used.set(x);
      if (dfs()) return true;
      used.reset(x);
      assign.pop_back();
    }
    return false;
  };
  if (dfs()) return assign;
  return std::nullopt;
}

ForbiddenResult find_forbidden_config(const GraphFamily& family, std::size_t n, std::size_t h_max,
                                      std::size_t corpus_size, std::uint64_t seed, std::size_t node_budget) {
  if (corpus_size < 1) throw ParameterError("corpus must hold at least one structure");
  std::vector<BitGraph> corpus;
  for (std::size_t c = 0; c < corpus_size; ++c) corpus.push_back(family(derive_seed(seed, c)));
  ForbiddenResult out;
  out.corpus_size = corpus_size;
  for (std::size_t h = 1; h <= h_max; ++h) {
    const std::size_t pairs = ConfigTemplate(h, n).cross_pairs().size();
    if (pairs > 20) throw BudgetError("template space 2^" + std::to_string(pairs) + " too large at h=" + std::to_string(h));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      const ConfigTemplate g = ConfigTemplate::from_mask(h, n, mask);
      ++out.templates_tried;
      bool realized = false;
      for (const auto& graph : corpus)
        if (realize_template(graph, g, node_budget)) {
          realized = true;
          break;
        }
      if (!realized) {
        out.status = SearchStatus::found;
        out.config = g;
        out.certificate = "empirically forbidden over " + std::to_string(corpus_size) + " structures";
        return out;
      }
    }
  }
  out.status = SearchStatus::not_found;
  out.certificate = "every template up to height " + std::to_string(h_max) + " realized in a corpus of " +
                    std::to_string(corpus_size);
  return out;
}

BitGraph four_cycle_free_graph(std::uint64_t seed) {
  // Canonical form of a 4-vertex graph: the least 6-bit mask over all relabellings.
  const std::array<std::pair<int, int>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  auto relabel = [&](unsigned mask, const std::array<int, 4>& p) {
    unsigned out = 0;
    for (std::size_t e = 0; e < 6; ++e)
      if ((mask >> e) & 1) {
        int a = p[pairs[e].first], b = p[pairs[e].second];
        if (a > b) std::swap(a, b);
        for (std::size_t f = 0; f < 6; ++f)
          if (pairs[f].first == a && pairs[f].second == b) out |= 1u << f;
      }
    return out;
  };
  auto canon = [&](unsigned mask) {
    std::array<int, 4> p{0, 1, 2, 3};
    unsigned best = mask;
    do best = std::min(best, relabel(mask, p));
    while (std::next_permutation(p.begin(), p.end()));
    return best;
  };
  // 0-1-2-3-0 with diagonals 0-2 and 1-3 missing.
  const unsigned c4 = canon((1u << 0) | (1u << 3) | (1u << 5) | (1u << 2));
  std::vector<unsigned> classes;
  for (unsigned m = 0; m < 64; ++m) {
    const unsigned c = canon(m);
    if (c != c4 && std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
  }
  const std::size_t n = 4 * classes.size();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(label);
  BitGraph g(n);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t e = 0; e < 6; ++e)
      if ((classes[c] >> e) & 1) g.add_edge(label[4 * c + pairs[e].first], label[4 * c + pairs[e].second]);
  return g;
}

// --- helix arrays ---------------------------------------------------------

Block BlockArray::block(std::size_t l) const {
  if (l >= blocks()) throw ParameterError("block index " + std::to_string(l) + " out of range");
  return Block(rows.begin() + static_cast<std::ptrdiff_t>(l * h),
               rows.begin() + static_cast<std::ptrdiff_t>((l + 1) * h));
}

bool in_col(std::size_t n, std::size_t i, std::size_t j) { return j != i && j != (i + 1) % (n + 1); }

bool beta_before(std::size_t n, std::size_t rho2, std::size_t k2, std::size_t rho, std::size_t k) {
  return in_col(n, k, k2) && (rho2 < rho || (rho2 == rho && k2 < k));
}

namespace {

// Pattern a^rho_k must realize against the beta-earlier cells.
Pattern helix_pattern(const std::vector<std::vector<std::size_t>>& rows, const ConfigTemplate& g, std::size_t rho,
                      std::size_t k) {
  Pattern p;
  const std::size_t n = g.n(), h = g.h();
  for (std::size_t rho2 = 0; rho2 <= rho; ++rho2)
    for (std::size_t k2 = 0; k2 <= n; ++k2) {
      if (!beta_before(n, rho2, k2, rho, k)) continue;
      const std::size_t e = rows[rho2][k2];
      (g.edge(rho % h, k, rho2 % h, k2) ? p.eta : p.nu).push_back(e);
    }
  return p;
}

}  // namespace

BlockArray build_array(const BitGraph& r, const std::vector<IndependencePart>& parts, const ConfigTemplate& g,
                       std::size_t num_rows, const ArrayOptions& options) {
  const std::size_t n = g.n(), h = g.h(), width = n + 1;
  if (parts.size() != width)
    throw ParameterError("template has " + std::to_string(width) + " columns but " + std::to_string(parts.size()) +
                         " parts were given");
  if (num_rows == 0 || num_rows % h != 0)
    throw ParameterError("num_rows must be a positive multiple of the template height " + std::to_string(h));
  if (options.check_precondition) {
    const std::size_t cap = options.precondition_cap.value_or(std::max<std::size_t>(1, h * (n - 1)));
    const DepthReport depth = independence_depth(r, parts, n, cap);
    if (!depth.holds) {
      for (const auto& c : depth.checks)
        if (!c.holds)
          throw PreconditionError("parts fail independence depth k=" + std::to_string(n) + " at cap " +
                                  std::to_string(cap) + ": " + parts[c.part].label + " misses eta=" +
                                  ids(c.failure->eta) + " nu=" + ids(c.failure->nu));
    }
  }

  BlockArray a;
  a.n = n;
  a.h = h;
  a.relation = r;
  for (const auto& p : parts) a.columns.push_back(p.members);
  a.rows.assign(num_rows, std::vector<std::size_t>(width, 0));
  const std::size_t cells = num_rows * width;
  Bitset used(r.size());

  auto candidates = [&](std::size_t rho, std::size_t k, Pattern& pattern) {
    pattern = helix_pattern(a.rows, g, rho, k);
    Bitset cand = realizers_in(a.relation, Bitset::of(a.relation.size(), a.columns[k]), pattern);
    cand.and_not(used);
    return cand;
  };
  auto fail = [&](std::size_t rho, std::size_t k, const Pattern& p, const std::string& why) {
    return PreconditionError("helix realization failed at a^" + std::to_string(rho + 1) + "_" + std::to_string(k) +
                             ": no element of column " + std::to_string(k) + " realizes eta=" + ids(p.eta) +
                             " nu=" + ids(p.nu) + why);
  };

  if (options.extend) {
    // Greedy, lowest index first; a fresh element adjacent exactly to eta when nothing fits.
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const std::size_t rho = cell / width, k = cell % width;
      Pattern p;
      Bitset cand = candidates(rho, k, p);
      std::size_t x = cand.first();
      if (x == Bitset::npos) {
        if (options.keep_triangle_free && has_internal_edge(a.relation, p.eta))
          throw fail(rho, k, p, " and eta carries an edge, so extension would close a triangle");
        x = a.relation.size();
        a.relation.grow(1);
        Bitset grown(x + 1);
        used.for_each([&](std::size_t u) { grown.set(u); });
        used = std::move(grown);
        for (auto e : p.eta) a.relation.add_edge(x, e);
        a.columns[k].push_back(x);
        a.extended.push_back(x);
      }
      used.set(x);
      a.rows[rho][k] = x;
    }
    return a;
  }

  // Backtracking over the helix with a node budget; remembers the deepest dead end.
  std::size_t nodes = 0, deepest = 0;
  Pattern deepest_pattern;
  bool exhausted = false;
  std::function<bool(std::size_t)> dfs = [&](std::size_t cell) -> bool {
    if (cell == cells) return true;
    const std::size_t rho = cell / width, k = cell % width;
    Pattern p;
    Bitset cand = candidates(rho, k, p);
    if (cand.none() && cell >= deepest) {
      deepest = cell;
      deepest_pattern = p;
    }
    for (std::size_t x = cand.first(); x != Bitset::npos; x = cand.next(x + 1)) {
      if (++nodes > options.node_budget) {
        exhausted = true;
        return false;
      }
      a.rows[rho][k] = x;
      used.set(x);
      if (dfs(cell + 1)) return true;
      used.reset(x);
      if (exhausted) return false;
    }
    return false;
  };
  if (!dfs(0)) {
    throw fail(deepest / width, deepest % width, deepest_pattern,
               exhausted ? " (search budget exhausted; deepest dead end shown)" : " (parts too shallow for this template)");
  }
  return a;
}

ArrayScan verify_array(const BlockArray& a, const ConfigTemplate& g) {
  ArrayScan scan;
  const std::size_t width = a.n + 1;
  if (g.n() != a.n || g.h() != a.h) throw ParameterError("array shape does not match the template");
  Bitset seen(a.relation.size());
  for (std::size_t rho = 0; rho < a.rows.size(); ++rho)
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t x = a.rows[rho][k];
      const auto& col = a.columns[k];
      if (x >= a.relation.size() || seen.test(x) || std::find(col.begin(), col.end(), x) == col.end()) {
        scan.holds = false;
        scan.failure = std::array<std::size_t, 4>{rho, k, rho, k};
        return scan;
      }
      seen.set(x);
    }
  for (std::size_t rho = 0; rho < a.rows.size(); ++rho)
    for (std::size_t k = 0; k < width; ++k)
      for (std::size_t rho2 = 0; rho2 <= rho; ++rho2)
        for (std::size_t k2 = 0; k2 < width; ++k2) {
          if (!beta_before(a.n, rho2, k2, rho, k)) continue;
          ++scan.pairs;
          if (a.relation.has_edge(a.rows[rho][k], a.rows[rho2][k2]) != g.edge(rho % a.h, k, rho2 % a.h, k2)) {
            scan.holds = false;
            scan.failure = std::array<std::size_t, 4>{rho, k, rho2, k2};
            return scan;
          }
        }
  return scan;
}

bool less_ell(const Block& y, const Block& z, const ConfigTemplate& g, const BitGraph& r) {
  check_shape(y, g);
  check_shape(z, g);
  const std::size_t n = g.n(), h = g.h();
  for (std::size_t t = 0; t < h; ++t)
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t t2 = 0; t2 < h; ++t2)
        for (std::size_t i2 = 0; i2 <= n; ++i2) {
          if (!in_col(n, i, i2)) continue;
          if (r.has_edge(z[t][i], y[t2][i2]) != g.edge(t, i, t2, i2)) return false;
        }
  return true;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> loop_relations(std::size_t n, std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> rel;  // (from, to): W_from <_l W_to
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j < i; ++j) rel.emplace_back(j, i);
  for (std::size_t j = 1; j <= m; ++j) rel.emplace_back(0, j);
  for (std::size_t j = m + 1; j <= n; ++j) rel.emplace_back(j, 0);
  return rel;
}

std::vector<std::pair<std::size_t, std::size_t>> scope_pairs(std::size_t n, std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      if (!in_col(n, i, j)) continue;
      if ((0 < j && j < i) || (j == 0 && i >= 1 && i <= m) || (m < j && i == 0)) out.emplace_back(i, j);
    }
  return out;
}

}  // namespace

LoopSearch pseudo_loop_search(const std::vector<Block>& candidates, const ConfigTemplate& g, const BitGraph& r,
                              std::size_t n, std::size_t node_budget) {
  LoopSearch out;
  const std::size_t B = candidates.size();
  if (n < 2 || B < n + 1) return out;
  std::vector<std::vector<char>> less(B, std::vector<char>(B, 0));
  for (std::size_t a = 0; a < B; ++a)
    for (std::size_t b = 0; b < B; ++b)
      if (a != b) less[a][b] = less_ell(candidates[a], candidates[b], g, r);

  std::vector<std::size_t> w(n + 1);
  std::vector<char> taken(B, 0);
  bool exhausted = false;
  std::function<bool(std::size_t)> chain = [&](std::size_t pos) -> bool {
    if (pos > n) {
      for (std::size_t w0 = 0; w0 < B; ++w0) {
        if (taken[w0]) continue;
        for (std::size_t m = 1; m < n; ++m) {
          bool ok = true;
          for (std::size_t j = 1; j <= n && ok; ++j) ok = j <= m ? less[w0][w[j]] : less[w[j]][w0];
          if (ok) {
            w[0] = w0;
            LoopReport rep;
            rep.blocks = w;
            rep.m = m;
            rep.verified = loop_relations(n, m);
            rep.constrained = scope_pairs(n, m);
            out.loop = std::move(rep);
            return true;
          }
        }
      }
      return false;
    }
    for (std::size_t c = 0; c < B; ++c) {
      if (taken[c]) continue;
      if (++out.nodes > node_budget) {
        exhausted = true;
        return false;
      }
      bool ok = true;
      for (std::size_t j = 1; j < pos && ok; ++j) ok = less[w[j]][c];
      if (!ok) continue;
      w[pos] = c;
      taken[c] = 1;
      if (chain(pos + 1)) return true;
      taken[c] = 0;
      if (exhausted) return false;
    }
    return false;
  };
  if (chain(1)) {
    out.status = SearchStatus::found;
    if (!loop_valid(*out.loop, candidates, g, r)) throw Error("internal: pseudo-loop failed re-validation");
  } else {
    out.status = exhausted ? SearchStatus::not_found : SearchStatus::none;
  }
  return out;
}

bool loop_valid(const LoopReport& loop, const std::vector<Block>& candidates, const ConfigTemplate& g,
                const BitGraph& r) {
  const std::size_t n = loop.blocks.size() - 1;
  if (loop.blocks.size() < 3 || loop.m < 1 || loop.m >= n) return false;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      if (loop.blocks[i] == loop.blocks[j]) return false;
  for (auto [from, to] : loop_relations(n, loop.m))
    if (!less_ell(candidates[loop.blocks[from]], candidates[loop.blocks[to]], g, r)) return false;
  return true;
}

Block plant_loop_block(BlockArray& a, const ConfigTemplate& g, const std::vector<std::size_t>& after,
                       const std::vector<std::size_t>& before) {
  const std::size_t n = a.n, h = a.h, base = a.relation.size();
  for (auto l : after)
    if (l >= a.blocks()) throw ParameterError("plant_loop_block: block " + std::to_string(l) + " out of range");
  for (auto l : before)
    if (l >= a.blocks()) throw ParameterError("plant_loop_block: block " + std::to_string(l) + " out of range");
  a.relation.grow(h * (n + 1));
  Block t(h, std::vector<std::size_t>(n + 1));
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t i = 0; i <= n; ++i) t[s][i] = base + s * (n + 1) + i;
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t s2 = 0; s2 < h; ++s2)
        for (std::size_t i2 = 0; i2 <= n; ++i2) {
          if (!in_col(n, i, i2) || !g.edge(s, i, s2, i2)) continue;
          for (auto l : after) a.relation.add_edge(t[s][i], a.rows[l * h + s2][i2]);   // B_after <_l t
          for (auto l : before) a.relation.add_edge(a.rows[l * h + s][i], t[s2][i2]);  // t <_l B_before
        }
  return t;
}

Block plant_loop_block(BlockArray& a, const ConfigTemplate& g, std::size_t after, std::size_t before) {
  return plant_loop_block(a, g, std::vector<std::size_t>{after}, std::vector<std::size_t>{before});
}

Sop3FromArray sop3_from_array(const BlockArray& a, const ConfigTemplate& g, const Sop3Options& options) {
  if (g.n() != a.n || g.h() != a.h) throw ParameterError("array shape does not match the template");
  Sop3FromArray out;
  const std::size_t n = a.n, h = a.h, width = n + 1, m = h * width, B = a.blocks();
  std::vector<Block> blocks;
  for (std::size_t l = 0; l < B; ++l) blocks.push_back(a.block(l));
  for (std::size_t i = 0; i < B && out.chain_ok; ++i)
    for (std::size_t j = i + 1; j < B; ++j)
      if (!less_ell(blocks[i], blocks[j], g, a.relation)) {
        out.chain_ok = false;
        out.chain_failure = std::make_pair(i, j);
        break;
      }
  if (!out.chain_ok) return out;

  auto less = [g](const FiniteStructure& s, std::span<const std::size_t> y, std::span<const std::size_t> z) {
    const std::size_t w = g.n() + 1;
    return less_ell(unflatten(y, g.h(), w), unflatten(z, g.h(), w), g, s.relation("R"));
  };
  out.phi_r.name = "phi_r";
  out.psi_l.name = "psi_l";
  out.phi_r.object_arity = out.psi_l.object_arity = m;
  out.phi_r.parameter_arity = out.psi_l.parameter_arity = n * m;
  out.phi_r.evaluator = [less, n, m](const FiniteStructure& s, std::span<const std::size_t> x,
                                     std::span<const std::size_t> y) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!less(s, y.subspan(i * m, m), x)) return false;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!less(s, y.subspan(i * m, m), y.subspan(j * m, m))) return false;
    }
    return true;
  };
  out.psi_l.evaluator = [less, n, m](const FiniteStructure& s, std::span<const std::size_t> x,
                                     std::span<const std::size_t> y) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!less(s, x, y.subspan(i * m, m))) return false;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!less(s, y.subspan(i * m, m), y.subspan(j * m, m))) return false;
    }
    return true;
  };

  // A_i and interleaved witnesses: [A_0 | c_0 | A_1 | c_1 | ...] when interleaving.
  std::vector<std::vector<std::size_t>> a_blocks;  // block indices of each A_i
  if (options.interleave_witnesses && B >= n + 1) {
    out.witness_source = "interleaved spare blocks";
    for (std::size_t base = 0; base + n < B; base += n + 1) {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), base);
      a_blocks.push_back(idx);
      out.witnesses.push_back(flatten(blocks[base + n]));
    }
  } else {
    out.witness_source = "none";
    for (std::size_t base = 0; base + n <= B; base += n) {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), base);
      a_blocks.push_back(idx);
    }
  }
  for (const auto& idx : a_blocks) {
    Tuple t;
    for (auto l : idx) {
      const auto f = flatten(blocks[l]);
      t.insert(t.end(), f.begin(), f.end());
    }
    out.a_tuples.push_back(std::move(t));
  }
  out.degenerate = a_blocks.size() <= 1;

  const FiniteStructure s = structure_from_graph(a.relation);
  std::vector<Tuple> domain;
  unsigned __int128 space = 1;
  for (std::size_t i = 0; i < m && space <= options.domain_budget; ++i) space *= s.universe_size;
  if (space <= options.domain_budget) {
    out.domain_note = "x ranges over every " + std::to_string(m) + "-tuple of the structure";
  } else {
    out.domain_note = "x ranges over array blocks, witnesses and supplied extras";
    for (const auto& b : blocks) domain.push_back(flatten(b));
    for (const auto& b : options.extra_objects) domain.push_back(flatten(b));
  }
  for (const auto& b : options.extra_objects) check_shape(b, g);

  out.verdict = check_sop3_fragment(s, out.phi_r, out.psi_l, out.a_tuples, out.witnesses, domain);
  if (out.degenerate) out.verdict.note += "; degenerate: fewer than two parameter blocks";

  auto certificate = [&](const Tuple& x, const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<Block> cands{unflatten(x, h, width)};
    for (const auto& grp : groups)
      for (auto l : grp) cands.push_back(blocks[l]);
    LoopSearch ls = pseudo_loop_search(cands, g, a.relation, n);
    return ls.loop;
  };
  if (!out.verdict.c1.holds && out.verdict.c1.x) {
    const std::size_t i = out.verdict.c1.i.value_or(0);
    out.c1_loop = certificate(*out.verdict.c1.x, {a_blocks[i]});
  }
  if (!out.verdict.c3.holds && out.verdict.c3.x)
    out.c3_loop = certificate(*out.verdict.c3.x, {a_blocks[*out.verdict.c3.i], a_blocks[*out.verdict.c3.j]});
  return out;
}

nlohmann::json array_json(const BlockArray& a) {
  return {{"n", a.n}, {"h", a.h}, {"rows", a.rows}, {"columns", a.columns}, {"extended", a.extended},
          {"universe", a.relation.size()}};
}

nlohmann::json loop_json(const LoopReport& loop, const std::vector<Block>& candidates) {
  nlohmann::json blocks = nlohmann::json::array();
  for (auto b : loop.blocks) blocks.push_back(candidates[b]);
  return {{"blocks", blocks}, {"candidate_index", loop.blocks}, {"m", loop.m},
          {"verified", loop.verified}, {"constrained", loop.constrained}};
}

}  // namespace charlab
