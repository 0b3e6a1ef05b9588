#include "charlab/counting.hpp"

#include "charlab/error.hpp"
#include "charlab/parallel.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <numeric>

namespace charlab {

namespace {

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::size_t>(r);
}

std::size_t pairs(std::size_t n) { return n * (n ? n - 1 : 0) / 2; }

struct AlphaSearch {
  const BitGraph& g;
  std::size_t n;
  std::atomic<std::size_t>& global_best;  // fewest induced edges seen by any branch
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best_set, current;
  std::vector<std::size_t> deg;

  void dfs(std::size_t pos, const Bitset& chosen, std::size_t edges) {
    const std::size_t r = n - current.size();
    if (r == 0) {
      if (edges < best) {
        best = edges;
        best_set = current;
        std::size_t g_best = global_best.load();
        while (edges < g_best && !global_best.compare_exchange_weak(g_best, edges)) {
        }
      }
      return;
    }
    const std::size_t total = g.size();
    if (total - pos < r) return;
    // Lower bound: the r smallest counts of neighbours inside the current set.
    deg.clear();
    for (std::size_t v = pos; v < total; ++v) deg.push_back(and_count(g.neighbors(v), chosen));
    std::vector<std::size_t> sorted = deg;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(r - 1), sorted.end());
    std::size_t lb = 0;
    for (std::size_t i = 0; i < r; ++i) lb += sorted[i];
    if (edges + lb >= best || edges + lb > global_best.load()) return;
    const std::vector<std::size_t> local = deg;
    for (std::size_t v = pos; v + r <= total; ++v) {
      Bitset next = chosen;
      next.set(v);
      current.push_back(v);
      dfs(v + 1, next, edges + local[v - pos]);
      current.pop_back();
      if (best == 0) return;
    }
  }
};

}  // namespace

AlphaResult alpha_exact(const BitGraph& g, std::size_t n, const CountingBudget& budget) {
  const std::size_t total = g.size();
  if (n > total) throw ParameterError("alpha_exact: n=" + std::to_string(n) + " exceeds |V|=" + std::to_string(total));
  if (binomial_capped(total, n, budget.subset_budget) > budget.subset_budget)
    throw BudgetError("alpha_exact: C(" + std::to_string(total) + "," + std::to_string(n) +
                      ") exceeds the subset budget " + std::to_string(budget.subset_budget) + "; use alpha_lower");
  AlphaResult res;
  res.n = n;
  res.exact = true;
  if (n == 0) return res;
  std::atomic<std::size_t> global{std::numeric_limits<std::size_t>::max()};
  const std::size_t roots = total - n + 1;
  std::vector<std::size_t> best(roots, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<std::size_t>> sets(roots);
  parallel_for(roots, budget.threads, [&](std::size_t v0) {
    AlphaSearch s{g, n, global, std::numeric_limits<std::size_t>::max(), {}, {v0}, {}};
    Bitset chosen(total);
    chosen.set(v0);
    s.dfs(v0 + 1, chosen, 0);
    best[v0] = s.best;
    sets[v0] = std::move(s.best_set);
  });
  std::size_t winner = 0;
  for (std::size_t r = 1; r < roots; ++r)
    if (best[r] < best[winner]) winner = r;
  res.witness = sets[winner];
  res.value = pairs(n) - best[winner];
  return res;
}

namespace {

// Greedy growth from `seed_set`; ties broken by `order` position.
std::vector<std::size_t> greedy_grow(const BitGraph& g, std::size_t n, std::vector<std::size_t> start,
                                     const std::vector<std::size_t>& order) {
  Bitset chosen(g.size());
  for (auto v : start) chosen.set(v);
  while (start.size() < n) {
    std::size_t pick = Bitset::npos, best = std::numeric_limits<std::size_t>::max();
    for (auto v : order) {
      if (chosen.test(v)) continue;
      const std::size_t d = and_count(g.neighbors(v), chosen);
      if (d < best) {
        best = d;
        pick = v;
      }
    }
    chosen.set(pick);
    start.push_back(pick);
  }
  std::sort(start.begin(), start.end());
  return start;
}

// First-improvement swaps of one member for one outsider while induced edges drop.
void swap_search(const BitGraph& g, std::vector<std::size_t>& set) {
  Bitset chosen(g.size());
  for (auto v : set) chosen.set(v);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < set.size() && !improved; ++i) {
      const std::size_t out = set[i];
      const std::size_t out_deg = and_count(g.neighbors(out), chosen);
      chosen.reset(out);
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (chosen.test(v) || v == out) continue;
        if (and_count(g.neighbors(v), chosen) < out_deg) {
          set[i] = v;
          chosen.set(v);
          improved = true;
          break;
        }
      }
      if (!improved) chosen.set(out);
    }
  }
  std::sort(set.begin(), set.end());
}

}  // namespace

AlphaResult alpha_lower(const BitGraph& g, std::size_t n, AlphaStrategy strategy, std::uint64_t seed,
                        std::size_t restarts) {
  if (n > g.size()) throw ParameterError("alpha_lower: n exceeds |V|");
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  AlphaResult res;
  res.n = n;
  if (n == 0) return res;
  auto score = [&](const std::vector<std::size_t>& s) { return pairs(n) - g.edges_within(s); };
  if (strategy == AlphaStrategy::greedy) {
    res.witness = greedy_grow(g, n, {}, order);
    res.value = score(res.witness);
    return res;
  }
  Rng rng(seed);
  bool first = true;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    rng.shuffle(order);
    auto set = greedy_grow(g, n, {order[0]}, order);
    swap_search(g, set);
    const std::size_t value = score(set);
    if (first || value > res.value) {
      res.value = value;
      res.witness = set;
      first = false;
    }
  }
  return res;
}

Rational turan_upper(std::size_t k, std::size_t n) {
  if (k < 2) throw ParameterError("turan_upper: k >= 2 required");
  const auto nn = static_cast<std::int64_t>(n);
  return (Rational(1) - Rational(1, static_cast<std::int64_t>(k - 1))) * Rational(nn * nn, 2);
}

TuranCheck turan_consistency(const BitGraph& g, std::size_t k, std::size_t n, const CountingBudget& budget) {
  TuranCheck c;
  c.bound = turan_upper(k, n);
  auto mes = max_empty_graph(g, budget);
  if (!mes.exact) throw BudgetError("turan_consistency: graph exceeds the exact max_empty_graph cap");
  c.max_empty = mes.size;
  c.applicable = mes.size < k;
  c.alpha = alpha_exact(g, n, budget).value;
  c.holds = !c.applicable || Rational(static_cast<std::int64_t>(c.alpha)) <= c.bound;
  return c;
}

namespace {

struct CliqueSearch {
  std::vector<std::uint64_t> adj;  // dual adjacency
  std::uint64_t best_mask = 0;
  std::size_t best = 0;

  void expand(std::uint64_t r, std::size_t size, std::uint64_t p) {
    // Greedy colouring of P in index order bounds the clique size reachable from here.
    std::vector<int> order;
    std::vector<std::size_t> colour;
    std::uint64_t uncoloured = p;
    std::size_t c = 0;
    while (uncoloured) {
      ++c;
      std::uint64_t avail = uncoloured;
      while (avail) {
        int v = std::countr_zero(avail);
        avail &= ~(std::uint64_t{1} << v);
        avail &= ~adj[v];
        uncoloured &= ~(std::uint64_t{1} << v);
        order.push_back(v);
        colour.push_back(c);
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (size + colour[i] <= best) return;
      const int v = order[i];
      const std::uint64_t bit = std::uint64_t{1} << v;
      const std::uint64_t nr = r | bit, np = p & adj[v];
      if (np == 0) {
        if (size + 1 > best) {
          best = size + 1;
          best_mask = nr;
        }
      } else {
        expand(nr, size + 1, np);
      }
      p &= ~bit;
    }
  }
};

}  // namespace

EmptyGraphResult max_empty_graph(const BitGraph& g, const CountingBudget& budget) {
  EmptyGraphResult res;
  const std::size_t n = g.size();
  if (n == 0) {
    res.exact = true;
    return res;
  }
  if (n <= std::min<std::size_t>(budget.clique_cap, 64)) {
    CliqueSearch s;
    s.adj.assign(n, 0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && !g.has_edge(u, v)) s.adj[u] |= std::uint64_t{1} << v;
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    s.expand(0, 0, all);
    res.size = s.best;
    for (std::size_t v = 0; v < n; ++v)
      if ((s.best_mask >> v) & 1u) res.witness.push_back(v);
    res.exact = true;
    return res;
  }
  // Min-degree greedy independent set.
  Bitset alive = Bitset::full(n);
  while (alive.any()) {
    std::size_t pick = Bitset::npos, best = std::numeric_limits<std::size_t>::max();
    alive.for_each([&](std::size_t v) {
      const std::size_t d = and_count(g.neighbors(v), alive);
      if (d < best) {
        best = d;
        pick = v;
      }
    });
    res.witness.push_back(pick);
    alive.reset(pick);
    alive.and_not(g.neighbors(pick));
  }
  std::sort(res.witness.begin(), res.witness.end());
  res.size = res.witness.size();
  return res;
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found:
      return "found";
    case SearchStatus::none:
      return "none";
    case SearchStatus::not_found:
      return "not-found";
  }
  return "?";
}

EmptyPairResult empty_pair_search(const BitGraph& g, std::size_t t, const CountingBudget& budget) {
  EmptyPairResult res;
  const std::size_t n = g.size();
  if (t == 0) {
    res.status = SearchStatus::found;
    return res;
  }
  if (2 * t > n) {
    res.status = SearchStatus::none;
    return res;
  }
  const bool exact = 2 * t <= budget.empty_pair_exact;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (!exact)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.degree(a) < g.degree(b); });
  std::size_t nodes = 0;
  bool exhausted = false;
  std::vector<std::size_t> xs;
  // pool: vertices outside X with no neighbour in X.
  std::function<bool(std::size_t, const Bitset&)> dfs = [&](std::size_t pos, const Bitset& pool) -> bool {
    if (xs.size() == t) {
      std::size_t taken = 0;
      for (std::size_t v = pool.first(); v != Bitset::npos && taken < t; v = pool.next(v + 1), ++taken)
        res.ys.push_back(v);
      res.xs = xs;
      return true;
    }
    for (std::size_t i = pos; i + (t - xs.size()) <= n; ++i) {
      if (!exact && ++nodes > budget.node_budget) {
        exhausted = true;
        return false;
      }
      const std::size_t x = order[i];
      Bitset next = pool;
      next.and_not(g.neighbors(x));
      next.reset(x);
      if (next.count() < t) continue;
      xs.push_back(x);
      if (dfs(i + 1, next)) return true;
      xs.pop_back();
      if (exhausted) return false;
    }
    return false;
  };
  if (dfs(0, Bitset::full(n))) {
    std::sort(res.xs.begin(), res.xs.end());
    std::sort(res.ys.begin(), res.ys.end());
    if (g.edges_between(res.xs, res.ys) != 0) throw Error("empty_pair_search: internal error, pair has edges");
    res.status = SearchStatus::found;
  } else {
    res.status = exact ? SearchStatus::none : SearchStatus::not_found;
  }
  return res;
}

OmissionProfile omission_profile(const BitGraph& g, const std::vector<std::size_t>& ns, std::size_t k,
                                 const CountingBudget& budget, std::uint64_t seed) {
  OmissionProfile prof;
  prof.k = k;
  for (auto n : ns) {
    OmissionRow row;
    row.n = n;
    try {
      row.alpha = alpha_exact(g, n, budget);
    } catch (const BudgetError&) {
      row.alpha = alpha_lower(g, n, AlphaStrategy::sampled, seed);
    }
    row.turan_upper = turan_upper(k, n);
    row.floor_half = n / 2;
    prof.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i + 1 < prof.rows.size(); ++i) {
    const auto& a = prof.rows[i];
    const auto& b = prof.rows[i + 1];
    if (a.alpha.exact && b.alpha.exact && b.n == a.n + 1)
      if (b.alpha.value < a.alpha.value || b.alpha.value > a.alpha.value + a.n) prof.monotone = false;
  }
  return prof;
}

std::string to_string(Regime r) {
  return r == Regime::quadratic_with_empty_pair ? "quadratic-with-empty-pair" : "subquadratic";
}

RegimeEvidence regime_classify(const std::function<BitGraph(std::size_t)>& family, const std::vector<std::size_t>& ns,
                               const CountingBudget& budget, std::uint64_t seed) {
  RegimeEvidence ev;
  ev.rule = "quadratic-with-empty-pair iff alpha(n) >= n^2/4 at every n and the largest empty pair grows";
  bool quadratic = !ns.empty();
  for (auto n : ns) {
    const BitGraph g = family(n);
    RegimeRow row;
    row.n = n;
    AlphaResult a;
    try {
      a = alpha_exact(g, n, budget);
    } catch (const BudgetError&) {
      a = alpha_lower(g, n, AlphaStrategy::sampled, seed);
    }
    row.alpha = a.value;
    row.alpha_exact = a.exact;
    row.ratio = n ? static_cast<double>(a.value) / static_cast<double>(n * n) : 0;
    row.empty_pair_exact = true;
    for (std::size_t t = 1; 2 * t <= g.size(); ++t) {
      auto r = empty_pair_search(g, t, budget);
      if (r.status != SearchStatus::found) {
        row.empty_pair_exact = r.status == SearchStatus::none;
        break;
      }
      row.empty_pair = t;
    }
    if (4 * a.value < n * n) quadratic = false;
    ev.rows.push_back(row);
  }
  if (ev.rows.size() >= 2 && ev.rows.back().empty_pair <= ev.rows.front().empty_pair) quadratic = false;
  ev.regime = quadratic ? Regime::quadratic_with_empty_pair : Regime::subquadratic;
  return ev;
}

}  // namespace charlab
