#include "charlab/error.hpp"
#include "charlab/kernels.hpp"
#include "charlab/parallel.hpp"
#include "charlab/regularity.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace charlab {

BipartitePair::BipartitePair(const BitGraph& g, std::vector<std::size_t> x, std::vector<std::size_t> y)
    : graph(&g), xs(std::move(x)), ys(std::move(y)) {
  std::vector<bool> seen(g.size(), false);
  for (auto v : xs) {
    if (v >= g.size()) throw ParameterError("pair vertex outside graph");
    if (seen[v]) throw ParameterError("pair side repeats vertex " + std::to_string(v));
    seen[v] = true;
  }
  for (auto v : ys) {
    if (v >= g.size()) throw ParameterError("pair vertex outside graph");
    if (seen[v]) throw ParameterError("pair sides are not disjoint at vertex " + std::to_string(v));
    seen[v] = true;
  }
}

std::size_t BipartitePair::edges() const { return graph->edges_between(xs, ys); }

Rational density(const BitGraph& g, std::span<const std::size_t> xs, std::span<const std::size_t> ys) {
  if (xs.empty() || ys.empty()) return Rational(0);
  return Rational(static_cast<std::int64_t>(g.edges_between(xs, ys)),
                  static_cast<std::int64_t>(xs.size() * ys.size()));
}

Rational density(const BipartitePair& pair) { return density(*pair.graph, pair.xs, pair.ys); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::regular:
      return "regular";
    case Verdict::irregular:
      return "irregular";
    case Verdict::undecided:
      return "undecided";
    case Verdict::assumed:
      return "assumed";
  }
  return "?";
}

std::size_t threshold_size(const Rational& epsilon, std::size_t side) {
  if (side == 0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(ceil_mul(epsilon, static_cast<std::int64_t>(side))));
}

namespace {

using i128 = __int128;

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

void check_epsilon(const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) throw ParameterError("epsilon must lie in (0,1), got " + to_string(epsilon));
}

// Picks t vertices of `others` with the largest (top) or smallest degrees, ties to the lower position.
std::vector<std::size_t> pick_by_degree(const std::vector<std::size_t>& others, const std::vector<std::uint32_t>& deg,
                                        std::size_t t, bool top) {
  std::vector<std::size_t> order(others.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return top ? deg[a] > deg[b] : deg[a] < deg[b];
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t; ++i) out.push_back(others[order[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

RegularityWitness make_witness(const BitGraph& g, const Rational& base, std::vector<std::size_t> xs,
                               std::vector<std::size_t> ys) {
  RegularityWitness w;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  w.density = density(g, xs, ys);
  w.gap = w.density > base ? w.density - base : base - w.density;
  w.xs = std::move(xs);
  w.ys = std::move(ys);
  return w;
}

struct Best {
  i128 gap = -1;
  std::uint64_t subset = 0;
  bool top = true;
};

}  // namespace

bool exact_feasible(std::size_t x_side, std::size_t y_side, const Rational& epsilon, const ExactOptions& options) {
  const std::size_t s = std::min(x_side, y_side);
  if (s > 32) return false;
  if (x_side <= options.side_cap && y_side <= options.side_cap) return true;
  const std::size_t t = threshold_size(epsilon, s);
  return binomial_capped(s, t, options.subset_budget) <= options.subset_budget;
}

PairVerdict check_regular_exact(const BipartitePair& pair, const Rational& epsilon, const ExactOptions& options) {
  check_epsilon(epsilon);
  const BitGraph& g = *pair.graph;
  PairVerdict v;
  v.exact = true;
  v.density = density(pair);
  if (pair.xs.empty() || pair.ys.empty()) {
    v.verdict = Verdict::regular;
    return v;
  }
  if (!exact_feasible(pair.xs.size(), pair.ys.size(), epsilon, options))
    throw BudgetError("exact regularity check on a " + std::to_string(pair.xs.size()) + "x" +
                      std::to_string(pair.ys.size()) + " pair exceeds the enumeration budget; use sampled mode");

  const bool swapped = pair.ys.size() < pair.xs.size();
  const auto& small = swapped ? pair.ys : pair.xs;
  const auto& other = swapped ? pair.xs : pair.ys;
  const std::size_t s = small.size(), o = other.size();
  const std::size_t ts = threshold_size(epsilon, s), to = threshold_size(epsilon, o);

  std::vector<std::uint32_t> masks(o, 0);
  for (std::size_t b = 0; b < o; ++b)
    for (std::size_t a = 0; a < s; ++a)
      if (g.has_edge(other[b], small[a])) masks[b] |= std::uint32_t{1} << a;

  const i128 total = static_cast<i128>(s) * o;
  const i128 e = static_cast<i128>(pair.edges());
  const i128 den = static_cast<i128>(ts) * to;

  // Shard by the lowest member of the subset; merging in shard order keeps the result deterministic.
  const std::size_t shards = s - ts + 1;
  std::vector<Best> best(shards);
  parallel_for(shards, options.threads, [&](std::size_t f) {
    std::vector<std::uint32_t> deg(o);
    std::vector<std::size_t> hist(ts + 1);
    Best local;
    const std::size_t rest = ts - 1, span = s - f - 1;
    auto visit = [&](std::uint64_t upper) {
      const auto subset = static_cast<std::uint32_t>((upper << (f + 1)) | (std::uint64_t{1} << f));
      kernels::subset_degrees(masks, subset, deg);
      std::fill(hist.begin(), hist.end(), 0);
      for (auto d : deg) ++hist[d];
      i128 top = 0, bottom = 0;
      std::size_t need = to;
      for (std::size_t d = ts + 1; d-- > 0 && need;) {
        std::size_t take = std::min(need, hist[d]);
        top += static_cast<i128>(take) * d;
        need -= take;
      }
      need = to;
      for (std::size_t d = 0; d <= ts && need; ++d) {
        std::size_t take = std::min(need, hist[d]);
        bottom += static_cast<i128>(take) * d;
        need -= take;
      }
      const i128 up = top * total - e * den, down = e * den - bottom * total;
      if (up > local.gap) local = {up, subset, true};
      if (down > local.gap) local = {down, subset, false};
    };
    if (rest == 0) {
      visit(0);
    } else {
      // Gosper's hack over rest-element subsets of the span bits above f.
      std::uint64_t c = (std::uint64_t{1} << rest) - 1;
      const std::uint64_t limit = std::uint64_t{1} << span;
      while (c < limit) {
        visit(c);
        const std::uint64_t low = c & (~c + 1), ripple = c + low;
        c = (((ripple ^ c) >> 2) / low) | ripple;
      }
    }
    best[f] = local;
  });
  Best winner;
  for (const auto& b : best)
    if (b.gap > winner.gap) winner = b;

  const i128 p = epsilon.numerator(), q = epsilon.denominator();
  if (winner.gap >= 0 && q * winner.gap >= p * den * total) {
    std::vector<std::size_t> chosen;
    for (std::size_t a = 0; a < s; ++a)
      if ((winner.subset >> a) & 1u) chosen.push_back(small[a]);
    std::vector<std::uint32_t> deg(o);
    kernels::subset_degrees(masks, static_cast<std::uint32_t>(winner.subset), deg);
    auto picked = pick_by_degree(other, deg, to, winner.top);
    v.verdict = Verdict::irregular;
    v.witness = swapped ? make_witness(g, v.density, std::move(picked), std::move(chosen))
                        : make_witness(g, v.density, std::move(chosen), std::move(picked));
  } else {
    v.verdict = Verdict::regular;
  }
  return v;
}

PairVerdict check_regular_sampled(const BipartitePair& pair, const Rational& epsilon, std::size_t trials,
                                  std::uint64_t seed) {
  check_epsilon(epsilon);
  if (trials < 1) throw ParameterError("check_regular_sampled: trials >= 1 required");
  const BitGraph& g = *pair.graph;
  PairVerdict v;
  v.density = density(pair);
  v.verdict = Verdict::undecided;
  if (pair.xs.empty() || pair.ys.empty()) {
    v.trials = trials;
    return v;
  }
  Rng rng(seed);
  const std::size_t tx = threshold_size(epsilon, pair.xs.size()), ty = threshold_size(epsilon, pair.ys.size());
  std::vector<std::uint32_t> deg;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const bool from_x = trial % 2 == 0;
    const auto& side = from_x ? pair.xs : pair.ys;
    const auto& other = from_x ? pair.ys : pair.xs;
    const std::size_t ts = from_x ? tx : ty, to = from_x ? ty : tx;
    std::vector<std::size_t> chosen;
    Bitset bits(g.size());
    for (auto idx : rng.sample(side.size(), ts)) {
      chosen.push_back(side[idx]);
      bits.set(side[idx]);
    }
    deg.assign(other.size(), 0);
    for (std::size_t b = 0; b < other.size(); ++b)
      deg[b] = static_cast<std::uint32_t>(and_count(g.neighbors(other[b]), bits));
    for (bool top : {true, false}) {
      auto picked = pick_by_degree(other, deg, to, top);
      auto w = from_x ? make_witness(g, v.density, chosen, picked) : make_witness(g, v.density, picked, chosen);
      if (w.gap >= epsilon) {
        v.verdict = Verdict::irregular;
        v.witness = std::move(w);
        v.trials = trial + 1;
        return v;
      }
    }
  }
  v.trials = trials;
  return v;
}

bool witness_valid(const BipartitePair& pair, const Rational& epsilon, const RegularityWitness& w) {
  const std::set<std::size_t> xs(pair.xs.begin(), pair.xs.end()), ys(pair.ys.begin(), pair.ys.end());
  const std::set<std::size_t> wx(w.xs.begin(), w.xs.end()), wy(w.ys.begin(), w.ys.end());
  if (wx.size() != w.xs.size() || wy.size() != w.ys.size()) return false;
  for (auto v : wx)
    if (!xs.count(v)) return false;
  for (auto v : wy)
    if (!ys.count(v)) return false;
  if (Rational(static_cast<std::int64_t>(w.xs.size())) < epsilon * static_cast<std::int64_t>(pair.xs.size()))
    return false;
  if (Rational(static_cast<std::int64_t>(w.ys.size())) < epsilon * static_cast<std::int64_t>(pair.ys.size()))
    return false;
  const Rational base = density(pair), sub = density(*pair.graph, w.xs, w.ys);
  const Rational gap = sub > base ? sub - base : base - sub;
  return gap >= epsilon && gap == w.gap && sub == w.density;
}

}  // namespace charlab
