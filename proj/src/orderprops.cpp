#include "charlab/orderprops.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <numeric>

namespace charlab {

namespace {

Tuple decode_tuple(std::size_t code, std::size_t base, std::size_t arity) {
  Tuple x(arity);
  for (std::size_t i = arity; i-- > 0;) {
    x[i] = code % base;
    code /= base;
  }
  return x;
}

// base^arity, or nullopt above cap.
std::optional<std::size_t> tuple_space(std::size_t base, std::size_t arity, std::size_t cap) {
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    r *= base;
    if (r > cap) return std::nullopt;
  }
  return static_cast<std::size_t>(r);
}

std::string list_str(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

// --- half-graph backtracking --------------------------------------------

struct HalfSearch {
  const BitGraph& r;
  std::size_t k;
  Bitset a_dom, b_dom;
  std::vector<std::size_t> order{};  // candidate order; position = priority
  std::size_t budget = 0;            // 0 = unlimited
  std::size_t nodes = 0;
  bool exhausted = false;
  std::vector<std::size_t> a{}, b{};
  Bitset used{};

  // Next a_i must avoid N(b_j) for every earlier b_j; next b_i must lie in N(a_j) for j < i, outside N(a_i).
  bool step(const Bitset& a_allowed, const Bitset& b_common) {
    if (a.size() == k) return true;
    if (budget && ++nodes > budget) {
      exhausted = true;
      return false;
    }
    for (auto u : order) {
      if (!a_allowed.test(u) || used.test(u)) continue;
      Bitset b_cand = b_common;
      b_cand.and_not(r.neighbors(u));
      b_cand.and_not(used);
      b_cand.reset(u);
      if (b_cand.none()) continue;
      used.set(u);
      a.push_back(u);
      Bitset next_b_common = b_common;
      next_b_common &= r.neighbors(u);
      for (auto v : order) {
        if (!b_cand.test(v)) continue;
        used.set(v);
        b.push_back(v);
        Bitset next_a = a_allowed;
        next_a.and_not(r.neighbors(v));
        if (step(next_a, next_b_common)) return true;
        b.pop_back();
        used.reset(v);
        if (exhausted) break;
      }
      a.pop_back();
      used.reset(u);
      if (exhausted) return false;
    }
    return false;
  }

  bool run() {
    used = Bitset(r.size());
    a.clear();
    b.clear();
    nodes = 0;
    exhausted = false;
    return step(a_dom, b_dom);
  }
};

Bitset domain_set(std::size_t n, const std::vector<std::size_t>& dom) {
  if (dom.empty()) return Bitset::full(n);
  for (auto v : dom)
    if (v >= n) throw ParameterError("domain element " + std::to_string(v) + " outside relation");
  return Bitset::of(n, dom);
}

bool selection_expected(const CopFragment& frag, const std::vector<std::size_t>& a_pos,
                        const std::vector<std::size_t>& b_pos) {
  if (a_pos.empty() || b_pos.empty()) return true;
  std::int64_t max_a = frag.alpha_keys[a_pos[0]];
  for (auto p : a_pos) max_a = std::max(max_a, frag.alpha_keys[p]);
  std::int64_t min_b = frag.beta_keys[b_pos[0]];
  for (auto p : b_pos) min_b = std::min(min_b, frag.beta_keys[p]);
  return max_a < min_b;
}

}  // namespace

// --- half-graphs --------------------------------------------------------

bool verify_half_graph(const BitGraph& r, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> all(a);
  all.insert(all.end(), b.begin(), b.end());
  for (auto v : all)
    if (v >= r.size()) return false;
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (r.has_edge(a[i], b[j]) != (i < j)) return false;
  return true;
}

HalfGraphResult find_half_graph(const BitGraph& r, std::size_t k, const HalfGraphOptions& options) {
  HalfGraphResult out;
  const std::size_t n = r.size();
  if (k == 0) {
    out.status = SearchStatus::found;
    out.exact = true;
    out.fragment.verified = true;
    return out;
  }
  HalfSearch search{r, k, domain_set(n, options.a_domain), domain_set(n, options.b_domain), {}, 0};
  out.exact = n <= options.exact_universe && k <= options.exact_k;
  if (out.exact) {
    search.order.resize(n);
    std::iota(search.order.begin(), search.order.end(), std::size_t{0});
    if (search.run()) {
      out.status = SearchStatus::found;
      out.fragment = {search.a, search.b, verify_half_graph(r, search.a, search.b)};
    }
    return out;
  }
  search.budget = options.node_budget;
  Rng rng(options.seed);
  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    // Degree-descending, ties broken by a seeded shuffle (none on the first pass).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (restart > 0) rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t u, std::size_t v) { return r.degree(u) > r.degree(v); });
    if (restart > 0 && n > 1) {
      // Perturb: a few random adjacent swaps so restarts explore different prefixes.
      for (std::size_t s = 0; s < n / 4 + 1; ++s) {
        std::size_t i = rng.below(n - 1);
        std::swap(order[i], order[i + 1]);
      }
    }
    search.order = std::move(order);
    if (search.run()) {
      out.status = SearchStatus::found;
      out.fragment = {search.a, search.b, verify_half_graph(r, search.a, search.b)};
      return out;
    }
    if (!search.exhausted) {
      // The whole tree was explored within budget: a definite answer after all.
      out.status = SearchStatus::none;
      out.exact = true;
      return out;
    }
  }
  out.status = SearchStatus::not_found;
  return out;
}

std::size_t max_half_graph_length(const BitGraph& r, const HalfGraphOptions& options) {
  std::size_t best = 0;
  for (std::size_t k = 1; 2 * k <= r.size(); ++k) {
    if (find_half_graph(r, k, options).status != SearchStatus::found) break;
    best = k;
  }
  return best;
}

// --- compatible / empty order properties --------------------------------

CopFragment CopFragment::from_rows(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  CopFragment f;
  f.alpha = std::move(a);
  f.beta = std::move(b);
  for (std::size_t i = 0; i < f.alpha.size(); ++i) f.alpha_keys.push_back(2 * static_cast<std::int64_t>(i));
  for (std::size_t j = 0; j < f.beta.size(); ++j) f.beta_keys.push_back(2 * static_cast<std::int64_t>(j));
  return f;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> CopFragment::to_strict_pairs() const {
  // Want b'_1 <= a'_1 < b'_2 <= a'_2 < ... in key order, so that a'_i < b'_j iff i < j.
  std::vector<std::size_t> ai(alpha.size()), bi(beta.size());
  std::iota(ai.begin(), ai.end(), std::size_t{0});
  std::iota(bi.begin(), bi.end(), std::size_t{0});
  std::stable_sort(ai.begin(), ai.end(), [&](auto x, auto y) { return alpha_keys[x] < alpha_keys[y]; });
  std::stable_sort(bi.begin(), bi.end(), [&](auto x, auto y) { return beta_keys[x] < beta_keys[y]; });
  std::vector<std::size_t> out_a, out_b;
  std::size_t pa = 0, pb = 0;
  while (pb < bi.size()) {
    if (!out_a.empty() && beta_keys[bi[pb]] <= alpha_keys[out_a.back()]) {
      ++pb;
      continue;
    }
    const std::int64_t bkey = beta_keys[bi[pb]];
    while (pa < ai.size() && alpha_keys[ai[pa]] < bkey) ++pa;
    if (pa == ai.size()) break;
    out_b.push_back(bi[pb]);
    out_a.push_back(ai[pa]);
    ++pa;
    ++pb;
  }
  // Translate positions to pool indices.
  for (auto& p : out_a) p = alpha[p];
  for (auto& p : out_b) p = beta[p];
  return {out_a, out_b};
}

OrderVerdict verify_cop(const CharSeq& cs, const CopFragment& frag, std::size_t m, bool support2) {
  if (frag.alpha_keys.size() != frag.alpha.size() || frag.beta_keys.size() != frag.beta.size())
    throw ParameterError("fragment keys do not match its rows");
  if (2 * m > cs.max_level())
    throw ParameterError("level " + std::to_string(2 * m) + " unavailable: max level is " +
                         std::to_string(cs.max_level()));
  OrderVerdict v;
  std::size_t top = 2 * m;
  if (support2 && top > 2) {
    bool ok = true;
    for (std::size_t l = 3; l <= top && ok; ++l) ok = support_check(cs, 2, l).holds;
    if (ok) {
      top = 2;
      v.used_support2 = true;
    } else {
      v.detail = "support 2 failed on the pool; full check used";
    }
  }
  const std::size_t na = frag.alpha.size(), nb = frag.beta.size();
  std::vector<std::size_t> args;
  for (std::size_t size = 1; size <= top && v.holds; ++size) {
    for_each_multiset(na + nb, size, [&](const std::vector<std::size_t>& sel) {
      Selection s;
      args.clear();
      for (auto p : sel) {
        if (p < na) {
          s.a.push_back(p);
          args.push_back(frag.alpha[p]);
        } else {
          s.b.push_back(p - na);
          args.push_back(frag.beta[p - na]);
        }
      }
      const bool expected = selection_expected(frag, s.a, s.b);
      const bool observed = cs.holds(args);
      ++v.checked;
      if (expected != observed) {
        v.holds = false;
        v.expected = expected;
        v.observed = observed;
        v.violation = std::move(s);
        return false;
      }
      return true;
    });
  }
  return v;
}

std::pair<std::vector<std::pair<std::int64_t, std::int64_t>>, std::vector<std::pair<std::int64_t, std::int64_t>>>
cop_index_formulas(std::size_t n) {
  const auto N = static_cast<std::int64_t>(n);
  std::vector<std::pair<std::int64_t, std::int64_t>> alpha, beta;
  for (std::int64_t i = 1; i <= N; ++i) {
    alpha.emplace_back(2 * i - 1, 4 * N - 2 * i + 1);
    beta.emplace_back(-2 * i, 2 * i);
  }
  return {alpha, beta};
}

CopBuild build_cop_from_ordered(const FiniteStructure& s, const FormulaSpec& rho, const OrderedBase& base,
                                std::size_t n) {
  if (n == 0) throw ParameterError("n must be at least 1");
  if (base.first.size() != base.second.size()) throw ParameterError("ordered base rows differ in length");
  if (rho.parameter_arity != 2) throw ArityError("rho must take two parameters (y, z)");
  const auto N = static_cast<std::int64_t>(n);
  if (base.lo > -2 * N || base.hi() < 4 * N - 1)
    throw ParameterError("ordered base must cover indices [" + std::to_string(-2 * N) + ", " +
                         std::to_string(4 * N - 1) + "], got [" + std::to_string(base.lo) + ", " +
                         std::to_string(base.hi()) + "]");
  const std::size_t len = base.first.size();
  auto pair_tuple = [&](std::int64_t i, std::int64_t j) {
    return Tuple{base.first[static_cast<std::size_t>(i - base.lo)], base.second[static_cast<std::size_t>(j - base.lo)]};
  };

  // Hypotheses over the whole base, via P_1 and P_2 on all (c_i, c_j).
  std::vector<Tuple> all;
  all.reserve(len * len);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < len; ++j)
      all.push_back(pair_tuple(base.lo + static_cast<std::int64_t>(i), base.lo + static_cast<std::int64_t>(j)));
  const CharSeq hyp = compute_charseq(s, rho, 2, all);
  auto idx = [&](std::size_t i, std::size_t j) { return i * len + j; };
  auto name = [&](std::size_t i) { return std::to_string(base.lo + static_cast<std::int64_t>(i)); };
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < len; ++j)
      if (hyp.p1(idx(i, j)) != (i < j))
        throw PreconditionError("hypothesis (1) fails at (i,j)=(" + name(i) + "," + name(j) +
                                "): exists x rho(x;c_i,c_j) is " + (hyp.p1(idx(i, j)) ? "true" : "false"));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j)
      for (std::size_t k = 0; k < len; ++k)
        for (std::size_t l = k + 1; l < len; ++l) {
          const bool expected = std::max(i, k) < std::min(j, l);
          if (hyp.p2(idx(i, j), idx(k, l)) != expected)
            throw PreconditionError("hypothesis (2) fails on selection (" + name(i) + "," + name(j) + "),(" + name(k) +
                                    "," + name(l) + "): expected " + (expected ? "consistent" : "inconsistent"));
        }

  CopBuild out;
  auto [alpha_idx, beta_idx] = cop_index_formulas(n);
  out.alpha_index = alpha_idx;
  out.beta_index = beta_idx;
  for (auto [l, r] : alpha_idx) out.pool.push_back(pair_tuple(l, r));
  for (auto [l, r] : beta_idx) out.pool.push_back(pair_tuple(l, r));
  CopFragment& f = out.fragment;
  for (std::size_t i = 0; i < n; ++i) {
    f.alpha.push_back(i);
    f.beta.push_back(n + i);
    // The formulas give P(alpha_i, beta_j) iff i <= j.
    f.alpha_keys.push_back(2 * static_cast<std::int64_t>(i + 1));
    f.beta_keys.push_back(2 * static_cast<std::int64_t>(i + 1) + 1);
  }
  const CharSeq cs = compute_charseq(s, rho, 2 * n, out.pool);
  const OrderVerdict v = verify_cop(cs, f, n);
  f.verified = v.holds;
  f.depth = v.holds ? n : 0;
  return out;
}

OrderVerdict verify_empty_op(const CharSeq& cs, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                             std::size_t n) {
  if (n > cs.max_level())
    throw ParameterError("level " + std::to_string(n) + " unavailable: max level is " + std::to_string(cs.max_level()));
  OrderVerdict v;
  for (std::size_t i = 0; i < a.size() && v.holds; ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      ++v.checked;
      const bool observed = cs.p2(a[i], b[j]);
      if (observed != (i < j)) {
        v.holds = false;
        v.violation = Selection{{i}, {j}};
        v.expected = i < j;
        v.observed = observed;
        v.detail = "(i) P_2(a_i, b_j) iff i < j";
        break;
      }
    }
  if (!v.holds) return v;
  v.vacuous = a.size() < n && b.size() < n;
  for (int row = 0; row < 2 && v.holds; ++row) {
    const auto& seq = row == 0 ? a : b;
    std::vector<std::size_t> args(n);
    for_each_combination(seq.size(), n, [&](const std::vector<std::size_t>& c) {
      for (std::size_t t = 0; t < n; ++t) args[t] = seq[c[t]];
      ++v.checked;
      if (cs.holds(args)) {
        v.holds = false;
        v.expected = false;
        v.observed = true;
        Selection s;
        (row == 0 ? s.a : s.b) = c;
        v.violation = std::move(s);
        v.detail = row == 0 ? "(ii) a-row is not P_n-empty" : "(ii) b-row is not P_n-empty";
        return false;
      }
      return true;
    });
  }
  if (v.holds && v.vacuous) v.detail = "rows shorter than n: (ii) is vacuous";
  return v;
}

nlohmann::json fragment_json(const std::string& kind, const std::vector<std::size_t>& a,
                             const std::vector<std::size_t>& b, std::size_t depth, bool verified) {
  return {{"kind", kind}, {"a", a}, {"b", b}, {"depth", depth}, {"verified", verified}};
}

// --- patterns -----------------------------------------------------------

std::optional<std::size_t> pattern_realization(const BitGraph& r, const std::vector<std::size_t>& b_seq,
                                               const std::vector<std::size_t>& eta,
                                               const std::vector<std::size_t>& nu,
                                               const std::vector<std::size_t>& domain) {
  Bitset cand = domain_set(r.size(), domain);
  Bitset in_eta(b_seq.size());
  for (auto j : eta) {
    if (j >= b_seq.size()) throw ParameterError("eta index outside b sequence");
    in_eta.set(j);
    cand &= r.neighbors(b_seq[j]);
  }
  for (auto k : nu) {
    if (k >= b_seq.size()) throw ParameterError("nu index outside b sequence");
    if (in_eta.test(k)) throw ParameterError("eta and nu must be disjoint");
    cand.and_not(r.neighbors(b_seq[k]));
  }
  for (auto j : eta) cand.reset(b_seq[j]);
  for (auto k : nu) cand.reset(b_seq[k]);
  const std::size_t x = cand.first();
  if (x == Bitset::npos) return std::nullopt;
  return x;
}

PatternBatch pattern_realization_batch(const BitGraph& r, const std::vector<std::size_t>& b_seq, std::size_t s,
                                       const std::vector<std::size_t>& domain) {
  PatternBatch out;
  for (std::size_t size = 0; size <= std::min(s, b_seq.size()) && out.all_realized; ++size) {
    for_each_combination(b_seq.size(), size, [&](const std::vector<std::size_t>& c) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << size); ++mask) {
        std::vector<std::size_t> eta, nu;
        for (std::size_t t = 0; t < size; ++t) ((mask >> t) & 1 ? eta : nu).push_back(c[t]);
        ++out.patterns;
        if (!pattern_realization(r, b_seq, eta, nu, domain)) {
          out.all_realized = false;
          out.failure = {eta, nu};
          return false;
        }
      }
      return true;
    });
  }
  return out;
}

// --- SOP_3 / SOP_n ------------------------------------------------------

Sop3Verdict check_sop3_fragment(const FiniteStructure& s, const FormulaSpec& phi, const FormulaSpec& psi,
                                const std::vector<Tuple>& a_blocks, const std::vector<Tuple>& c_witnesses,
                                const std::vector<Tuple>& domain) {
  if (phi.object_arity != psi.object_arity || phi.parameter_arity != psi.parameter_arity)
    throw ArityError("phi and psi must share their arities");
  for (const auto& a : a_blocks)
    if (a.size() != phi.parameter_arity)
      throw ArityError("block of length " + std::to_string(a.size()) + " for parameter arity " +
                       std::to_string(phi.parameter_arity));
  for (const auto& c : c_witnesses)
    if (c.size() != phi.object_arity)
      throw ArityError("witness of length " + std::to_string(c.size()) + " for object arity " +
                       std::to_string(phi.object_arity));

  const std::size_t M = s.universe_size;
  std::vector<Tuple> xs = domain;
  if (xs.empty()) {
    auto space = tuple_space(M, phi.object_arity, std::size_t{1} << 22);
    if (!space) throw BudgetError("object space too large to enumerate");
    for (std::size_t code = 0; code < *space; ++code) xs.push_back(decode_tuple(code, M, phi.object_arity));
  }
  for (const auto& x : xs)
    if (x.size() != phi.object_arity) throw ArityError("domain tuple has the wrong length");

  const std::size_t B = a_blocks.size();
  std::vector<Bitset> phi_sat(B, Bitset(xs.size())), psi_sat(B, Bitset(xs.size()));
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t t = 0; t < xs.size(); ++t) {
      phi_sat[i].assign(t, phi.eval(s, xs[t], a_blocks[i]));
      psi_sat[i].assign(t, psi.eval(s, xs[t], a_blocks[i]));
    }

  Sop3Verdict v;
  v.note =
      "structure-relative: contradictory means no realizer in this structure; indiscernibility of the blocks is not "
      "checked";

  // (1): all parameters when the joint space is small, else the listed blocks.
  const auto joint = tuple_space(M, phi.object_arity + phi.parameter_arity, std::size_t{1} << 24);
  if (joint && domain.empty()) {
    const std::size_t ys = *tuple_space(M, phi.parameter_arity, std::size_t{1} << 24);
    v.c1.detail = "checked over every parameter tuple";
    for (std::size_t code = 0; code < ys && v.c1.holds; ++code) {
      const Tuple y = decode_tuple(code, M, phi.parameter_arity);
      for (const auto& x : xs)
        if (phi.eval(s, x, y) && psi.eval(s, x, y)) {
          v.c1.holds = false;
          v.c1.x = x;
          v.c1.detail = "common realizer at parameter " + list_str(y);
          break;
        }
    }
  } else {
    v.c1.detail = "checked over the listed blocks";
    for (std::size_t i = 0; i < B; ++i) {
      Bitset both = phi_sat[i];
      both &= psi_sat[i];
      if (both.any()) {
        v.c1.failures.emplace_back(i, i);
        if (v.c1.holds) {
          v.c1.holds = false;
          v.c1.i = i;
          v.c1.x = xs[both.first()];
        }
      }
    }
  }

  // (2): i <= j -> phi(c_j; a_i), i > j -> psi(c_j; a_i).
  if (c_witnesses.empty()) {
    v.c2.checked = false;
    v.c2.detail = "no witnesses supplied";
  } else {
    for (std::size_t j = 0; j < c_witnesses.size(); ++j)
      for (std::size_t i = 0; i < B; ++i) {
        const bool ok = i <= j ? phi.eval(s, c_witnesses[j], a_blocks[i]) : psi.eval(s, c_witnesses[j], a_blocks[i]);
        if (!ok) {
          v.c2.failures.emplace_back(i, j);
          if (v.c2.holds) {
            v.c2.holds = false;
            v.c2.i = i;
            v.c2.j = j;
            v.c2.x = c_witnesses[j];
            v.c2.detail = i <= j ? "phi(c_j; a_i) fails" : "psi(c_j; a_i) fails";
          }
        }
      }
  }

  // (3): i < j -> no x with phi(x; a_j) and psi(x; a_i).
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = i + 1; j < B; ++j) {
      Bitset both = phi_sat[j];
      both &= psi_sat[i];
      if (both.any()) {
        v.c3.failures.emplace_back(i, j);
        if (v.c3.holds) {
          v.c3.holds = false;
          v.c3.i = i;
          v.c3.j = j;
          v.c3.x = xs[both.first()];
          v.c3.detail = "phi(x; a_j) and psi(x; a_i) realized together";
        }
      }
    }
  return v;
}

CopToSop3 cop_to_sop3(const CharSeq& cs, const CopFragment& frag, std::size_t depth, bool enforce) {
  CopToSop3 out;
  out.precondition = verify_cop(cs, frag, depth);
  if (!out.precondition.holds && enforce)
    throw PreconditionError("fragment fails verify_cop at depth " + std::to_string(depth));

  const FormulaSpec theta = cs.formula();
  const std::size_t p = theta.parameter_arity;
  out.phi.name = "phi(" + theta.name + ")";
  out.phi.parameter_arity = 2 * p;
  out.phi.object_arity = theta.object_arity;
  out.phi.evaluator = [theta, p](const FiniteStructure& s, std::span<const std::size_t> x,
                                 std::span<const std::size_t> y) {
    return theta.evaluator(s, x, y.first(p)) && !theta.evaluator(s, x, y.subspan(p));
  };
  out.psi.name = "psi(" + theta.name + ")";
  out.psi.parameter_arity = 2 * p;
  out.psi.object_arity = theta.object_arity;
  out.psi.evaluator = [theta, p](const FiniteStructure& s, std::span<const std::size_t> x,
                                 std::span<const std::size_t> y) { return theta.evaluator(s, x, y.subspan(p)); };

  auto [sa, sb] = frag.to_strict_pairs();
  const std::size_t B = sa.size();
  for (std::size_t i = 0; i < B; ++i) {
    Tuple block = cs.tuple(sa[i]);
    const Tuple& z = cs.tuple(sb[i]);
    block.insert(block.end(), z.begin(), z.end());
    out.blocks.push_back(std::move(block));
  }

  // c_j: theta on a_1..a_j and b_{j+1}.., not theta on b_1..b_j, read off the cached sets.
  for (std::size_t j = 0; j < B; ++j) {
    Bitset acc = Bitset::full(cs.object_space());
    for (std::size_t i = 0; i < B; ++i) {
      if (i <= j) {
        acc &= cs.satisfying(sa[i]);
        acc.and_not(cs.satisfying(sb[i]));
      } else {
        acc &= cs.satisfying(sb[i]);
      }
    }
    const std::size_t code = acc.first();
    if (code == Bitset::npos) {
      out.witnesses.clear();
      break;
    }
    out.witnesses.push_back(cs.decode(code));
  }

  out.verdict = check_sop3_fragment(cs.structure(), out.phi, out.psi, out.blocks, out.witnesses);
  if (out.witnesses.empty() && B > 0) {
    out.verdict.c2.checked = false;
    out.verdict.c2.holds = false;
    out.verdict.c2.detail = "no interleaved witness realized in this structure";
  }
  for (auto [i, j] : out.verdict.c3.failures) out.cross_report.push_back({{i, j}, cs.p2(sa[j], sb[i])});
  return out;
}

SopnVerdict sopn_cycle_check(const BitDigraph& phi, const std::vector<std::size_t>& chain, std::size_t n) {
  if (n == 0) throw ParameterError("cycle length must be positive");
  SopnVerdict v;
  for (auto c : chain)
    if (c >= phi.size()) throw ParameterError("chain element outside relation");
  for (std::size_t i = 0; i < chain.size() && v.chain_holds; ++i)
    for (std::size_t j = i + 1; j < chain.size(); ++j)
      if (!phi.has_arc(chain[i], chain[j])) {
        v.chain_holds = false;
        v.chain_failure = std::make_pair(i, j);
        break;
      }

  const std::size_t V = phi.size();
  for (std::size_t start = 0; start < V && !v.cycle_found; ++start) {
    // layers[t] = vertices reachable from start in exactly t steps.
    std::vector<Bitset> layers(n, Bitset(V));
    layers[0].set(start);
    for (std::size_t t = 1; t < n; ++t)
      layers[t - 1].for_each([&](std::size_t u) { layers[t] |= phi.successors(u); });
    std::size_t last = Bitset::npos;
    layers[n - 1].for_each([&](std::size_t u) {
      if (last == Bitset::npos && phi.has_arc(u, start)) last = u;
    });
    if (last == Bitset::npos) continue;
    std::vector<std::size_t> cycle(n);
    cycle[n - 1] = last;
    for (std::size_t t = n - 1; t > 0; --t) {
      std::size_t pred = Bitset::npos;
      layers[t - 1].for_each([&](std::size_t u) {
        if (pred == Bitset::npos && phi.has_arc(u, cycle[t])) pred = u;
      });
      cycle[t - 1] = pred;
    }
    v.cycle_found = true;
    v.cycle = std::move(cycle);
  }
  return v;
}

BitDigraph digraph_from_formula(const FiniteStructure& s, const FormulaSpec& f) {
  if (f.object_arity != 1 || f.parameter_arity != 1) throw ArityError("digraph needs a formula phi(x; y) on singletons");
  BitDigraph d(s.universe_size);
  for (std::size_t x = 0; x < s.universe_size; ++x)
    for (std::size_t y = 0; y < s.universe_size; ++y) {
      const std::size_t xa[1] = {x}, ya[1] = {y};
      if (f.eval(s, xa, ya)) d.add_arc(x, y);
    }
  return d;
}

}  // namespace charlab
