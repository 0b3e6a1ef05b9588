#include "charlab/error.hpp"
#include "charlab/regularity.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace charlab {

InterstitialReport interstitial_report(const BitGraph& g, const RegularPartition& p, const Rational& c,
                                       std::size_t ell, std::size_t ell_prime) {
  if (ell_prime == 0) throw ParameterError("interstitial_report: l' >= 1 required");
  InterstitialReport r;
  bool any_regular = false;
  for (const auto& pr : p.pairs) {
    InterstitialPair row{pr.i, pr.j, p.classes[pr.i].size(), p.classes[pr.j].size(), 0};
    row.omitted = row.size_i * row.size_j - pr.edges;
    r.interstitial_omitted += row.omitted;
    r.per_pair.push_back(row);
    const auto v = pr.verdict.verdict;
    if (v == Verdict::regular || v == Verdict::assumed) {
      if (!any_regular || pr.verdict.density < r.delta_min) r.delta_min = pr.verdict.density;
      any_regular = true;
    }
  }
  for (const auto& cls : p.classes) r.internal_omitted += cls.size() * (cls.size() - (cls.empty() ? 0 : 1)) / 2 - g.edges_within(cls);
  const Rational& eps = p.epsilon;
  r.lhs = eps + (Rational(1) - eps) * (Rational(1) - r.delta_min);
  r.rhs = c * static_cast<std::int64_t>(ell) / static_cast<std::int64_t>(ell_prime);
  r.inequality_holds = r.lhs < r.rhs;
  return r;
}

namespace {

std::size_t omitted_within(const BitGraph& g, const std::vector<std::size_t>& vs) {
  const std::size_t n = vs.size();
  return n * (n ? n - 1 : 0) / 2 - g.edges_within(vs);
}

}  // namespace

HierarchicalLedger hierarchical_decomposition(const BitGraph& g, const PartitionConfig& config, std::size_t depth,
                                              const Rational& c) {
  if (depth < 1) throw ParameterError("hierarchical_decomposition: depth >= 1 required");
  HierarchicalLedger ledger;
  ledger.c = c;
  std::vector<std::vector<std::size_t>> components(1);
  components[0].resize(g.size());
  std::iota(components[0].begin(), components[0].end(), 0);

  for (std::size_t level = 1; level <= depth; ++level) {
    LedgerLevel row;
    row.level = level;
    std::vector<std::vector<std::size_t>> next;
    std::size_t index = 0;
    for (const auto& comp : components) {
      if (comp.size() < std::max<std::size_t>(config.m0, 2)) {
        ++row.truncated;
        next.push_back(comp);
        continue;
      }
      PartitionConfig local = config;
      local.seed = derive_seed(config.seed, level * 1000003 + index++);
      const BitGraph sub = g.induced(comp);
      const auto p = regularity_partition(sub, local);
      row.min_k = row.min_k == 0 ? p.k() : std::min(row.min_k, p.k());
      row.max_k = std::max(row.max_k, p.k());
      for (const auto& pr : p.pairs) row.interstitial_omitted += p.classes[pr.i].size() * p.classes[pr.j].size() - pr.edges;
      for (const auto& cls : p.classes) {
        std::vector<std::size_t> mapped;
        for (auto v : cls) mapped.push_back(comp[v]);
        next.push_back(std::move(mapped));
      }
    }
    row.components = next.size();
    ledger.levels.push_back(row);
    components = std::move(next);
  }
  for (const auto& comp : components) ledger.bottom_internal_omitted += omitted_within(g, comp);
  ledger.total_omitted = g.omitted_count();
  std::size_t sum = ledger.bottom_internal_omitted;
  for (const auto& l : ledger.levels) sum += l.interstitial_omitted;
  ledger.reconciles = sum == ledger.total_omitted;

  const double n2 = static_cast<double>(g.size()) * static_cast<double>(g.size());
  double series = 1;
  for (std::size_t i = 1; i < ledger.levels.size(); ++i) {
    const double k = static_cast<double>(std::max<std::size_t>(ledger.levels[i - 1].min_k, 1));
    series += 1 / std::pow(k, static_cast<double>(i));
  }
  const double kt = static_cast<double>(std::max<std::size_t>(ledger.levels.back().min_k, 1));
  ledger.telescoped_bound = to_double(c) * n2 * series + n2 / std::pow(kt, static_cast<double>(ledger.levels.size()));
  return ledger;
}

std::vector<SpectrumRow> density_spectrum(const BitGraph& g, const std::vector<std::size_t>& sizes,
                                          const Rational& epsilon, std::size_t trials, std::uint64_t seed,
                                          const std::vector<std::size_t>& side_a, const std::vector<std::size_t>& side_b,
                                          const ExactOptions& options) {
  const bool sided = !side_a.empty() || !side_b.empty();
  if (sided) {
    std::set<std::size_t> a(side_a.begin(), side_a.end());
    for (auto v : side_b)
      if (a.count(v)) throw ParameterError("density_spectrum: sides must be disjoint");
  }
  std::vector<SpectrumRow> rows;
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::size_t s = sizes[si];
    if (s == 0) continue;
    if (sided ? (s > side_a.size() || s > side_b.size()) : 2 * s > g.size())
      throw ParameterError("density_spectrum: size " + std::to_string(s) + " does not fit in the graph");
    if (!exact_feasible(s, s, epsilon, options)) continue;
    Rng rng(derive_seed(seed, si));
    for (std::size_t trial = 0; trial < trials; ++trial) {
      std::vector<std::size_t> xs, ys;
      if (sided) {
        for (auto i : rng.sample(side_a.size(), s)) xs.push_back(side_a[i]);
        for (auto i : rng.sample(side_b.size(), s)) ys.push_back(side_b[i]);
      } else {
        auto picked = rng.sample(g.size(), 2 * s);
        rng.shuffle(picked);
        xs.assign(picked.begin(), picked.begin() + static_cast<std::ptrdiff_t>(s));
        ys.assign(picked.begin() + static_cast<std::ptrdiff_t>(s), picked.end());
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
      }
      if (!seen.insert({xs, ys}).second) continue;
      BipartitePair pair(g, xs, ys);
      auto v = check_regular_exact(pair, epsilon, options);
      if (v.verdict != Verdict::regular) continue;
      rows.push_back({s, std::move(xs), std::move(ys), v.density, true});
    }
  }
  return rows;
}

}  // namespace charlab
