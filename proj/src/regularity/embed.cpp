#include "charlab/error.hpp"
#include "charlab/regularity.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace charlab {

Rational key_lemma_eps0(const Rational& delta, const Rational& epsilon, std::size_t max_degree) {
  return pow(delta - epsilon, static_cast<unsigned>(max_degree)) / Rational(static_cast<std::int64_t>(2 + max_degree));
}

namespace {

std::string show(const Rational& r) {
  std::ostringstream out;
  out << to_string(r) << " (" << to_double(r) << ")";
  return out.str();
}

}  // namespace

bool embedding_valid(const BitGraph& g, const BitGraph& h, const std::vector<std::size_t>& map) {
  if (map.size() != h.size()) return false;
  std::vector<std::size_t> sorted = map;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (auto v : map)
    if (v >= g.size()) return false;
  for (auto [a, b] : h.edges())
    if (!g.has_edge(map[a], map[b])) return false;
  return true;
}

std::optional<Embedding> key_lemma_embed(const BitGraph& g, const RegularPartition& p, const Rational& delta,
                                         const BitGraph& h, const std::vector<std::size_t>& assignment) {
  if (assignment.size() != h.size()) throw ParameterError("key_lemma_embed: one class per H-vertex required");
  for (auto c : assignment)
    if (c >= p.k()) throw ParameterError("key_lemma_embed: class index " + std::to_string(c) + " out of range");
  const Rational& eps = p.epsilon;
  if (!(delta > eps)) throw PreconditionError("delta > epsilon fails: delta=" + show(delta) + ", epsilon=" + show(eps));

  Embedding out;
  for (std::size_t v = 0; v < h.size(); ++v) out.max_degree = std::max(out.max_degree, h.degree(v));
  out.d = delta - eps;
  out.eps0 = key_lemma_eps0(delta, eps, out.max_degree);
  if (eps > out.eps0)
    throw PreconditionError("epsilon <= eps0 fails: epsilon=" + show(eps) + " > eps0=(delta-epsilon)^Delta/(2+Delta)=" +
                            show(out.eps0) + " with delta=" + show(delta) + ", Delta=" + std::to_string(out.max_degree));

  std::map<std::size_t, std::size_t> multiplicity;
  for (auto c : assignment) ++multiplicity[c];
  std::size_t m = g.size();
  for (auto [c, count] : multiplicity) {
    out.blow_up_height = std::max(out.blow_up_height, count);
    m = std::min(m, p.classes[c].size());
  }
  if (!h.size()) return out;
  const auto t_minus_1 = static_cast<std::int64_t>(out.blow_up_height) - 1;
  if (Rational(t_minus_1) > out.eps0 * static_cast<std::int64_t>(m))
    throw PreconditionError("t-1 <= eps0*m fails: t-1=" + std::to_string(t_minus_1) + " > eps0*m=" +
                            show(out.eps0 * static_cast<std::int64_t>(m)) + " with m=" + std::to_string(m));
  for (auto [a, b] : h.edges()) {
    if (assignment[a] == assignment[b])
      throw PreconditionError("H is not a subgraph of R(t): adjacent H-vertices " + std::to_string(a) + ", " +
                              std::to_string(b) + " share class " + std::to_string(assignment[a]));
    const auto& pr = p.pair(assignment[a], assignment[b]);
    if (pr.verdict.verdict == Verdict::irregular)
      throw PreconditionError("pair (" + std::to_string(pr.i) + "," + std::to_string(pr.j) +
                              ") is certified irregular at epsilon=" + show(eps));
    if (pr.verdict.density < delta)
      throw PreconditionError("density >= delta fails on pair (" + std::to_string(pr.i) + "," + std::to_string(pr.j) +
                              "): density=" + show(pr.verdict.density) + " < delta=" + show(delta));
  }

  const std::size_t hn = h.size();
  std::vector<Bitset> cand(hn, Bitset(g.size()));
  for (std::size_t v = 0; v < hn; ++v)
    for (auto x : p.classes[assignment[v]]) cand[v].set(x);
  Bitset used(g.size());
  const Rational shrink = out.d - eps;
  out.map.assign(hn, 0);

  for (std::size_t v = 0; v < hn; ++v) {
    std::vector<std::size_t> later;
    for (std::size_t w = v + 1; w < hn; ++w)
      if (h.has_edge(v, w)) later.push_back(w);
    Bitset pool = cand[v];
    pool.and_not(used);
    std::size_t chosen = Bitset::npos, fallback = Bitset::npos;
    for (std::size_t x = pool.first(); x != Bitset::npos; x = pool.next(x + 1)) {
      bool typical = true, viable = true;
      for (auto w : later) {
        Bitset next = cand[w];
        next &= g.neighbors(x);
        next.and_not(used);
        next.reset(x);
        const auto kept = static_cast<std::int64_t>(next.count());
        if (kept == 0) viable = false;
        if (Rational(kept) < shrink * static_cast<std::int64_t>(cand[w].count())) typical = false;
      }
      if (viable && typical) {
        chosen = x;
        break;
      }
      if (viable && fallback == Bitset::npos) fallback = x;
    }
    if (chosen == Bitset::npos) chosen = fallback;
    if (chosen == Bitset::npos) return std::nullopt;
    out.map[v] = chosen;
    used.set(chosen);
    for (auto w : later) cand[w] &= g.neighbors(chosen);
    std::vector<std::size_t> sizes;
    for (std::size_t w = 0; w < hn; ++w) {
      Bitset free = cand[w];
      free.and_not(used);
      sizes.push_back(w <= v ? 1 : free.count());
    }
    out.candidate_sizes.push_back(std::move(sizes));
  }
  if (!embedding_valid(g, h, out.map)) throw Error("key_lemma_embed: internal error, embedding failed re-validation");
  return out;
}

std::optional<EmptyPair> empty_pair_embed_dual(const BitGraph& g, const RegularPartition& p, const Rational& delta,
                                               std::size_t t) {
  if (t < 1) throw ParameterError("empty_pair_embed_dual: t >= 1 required");
  const BitGraph dual = g.dual();
  // Regularity is shared by a pair and its dual: every sub-density d' becomes 1 - d'.
  RegularPartition dp = p;
  for (auto& pr : dp.pairs) {
    pr.edges = p.classes[pr.i].size() * p.classes[pr.j].size() - pr.edges;
    pr.verdict.density = Rational(1) - pr.verdict.density;
    if (pr.verdict.witness) pr.verdict.witness->density = Rational(1) - pr.verdict.witness->density;
  }
  for (const auto& pr : dp.pairs) {
    const auto v = pr.verdict.verdict;
    if (!(v == Verdict::regular || v == Verdict::assumed) || pr.verdict.density < delta) continue;
    BitGraph h(2 * t);
    std::vector<std::size_t> assignment(2 * t);
    for (std::size_t a = 0; a < t; ++a) {
      assignment[a] = pr.i;
      assignment[t + a] = pr.j;
      for (std::size_t b = 0; b < t; ++b) h.add_edge(a, t + b);
    }
    auto emb = key_lemma_embed(dual, dp, delta, h, assignment);
    if (!emb) return std::nullopt;
    EmptyPair out;
    out.class_i = pr.i;
    out.class_j = pr.j;
    out.xs.assign(emb->map.begin(), emb->map.begin() + static_cast<std::ptrdiff_t>(t));
    out.ys.assign(emb->map.begin() + static_cast<std::ptrdiff_t>(t), emb->map.end());
    std::sort(out.xs.begin(), out.xs.end());
    std::sort(out.ys.begin(), out.ys.end());
    if (g.edges_between(out.xs, out.ys) != 0) throw Error("empty_pair_embed_dual: internal error, pair has edges");
    return out;
  }
  return std::nullopt;
}

}  // namespace charlab
