#include "charlab/error.hpp"
#include "charlab/parallel.hpp"
#include "charlab/regularity.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <numeric>

namespace charlab {

std::string to_string(PartitionStatus s) {
  switch (s) {
    case PartitionStatus::budget_met:
      return "budget-met";
    case PartitionStatus::budget_unmet:
      return "budget-unmet";
    case PartitionStatus::unchecked:
      return "unchecked";
  }
  return "?";
}

const PairReport& RegularPartition::pair(std::size_t i, std::size_t j) const {
  if (i == j || i >= k() || j >= k()) throw ParameterError("no pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  if (i > j) std::swap(i, j);
  // Row-major index of (i, j), i < j.
  const std::size_t idx = i * k() - i * (i + 1) / 2 + (j - i - 1);
  return pairs[idx];
}

std::size_t RegularPartition::irregular_count() const {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const PairReport& r) {
    return r.verdict.verdict == Verdict::irregular;
  }));
}

std::size_t RegularPartition::undecided_count() const {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const PairReport& r) {
    return r.verdict.verdict == Verdict::undecided;
  }));
}

std::size_t RegularPartition::min_class_size() const {
  std::size_t m = classes.empty() ? 0 : classes[0].size();
  for (const auto& c : classes) m = std::min(m, c.size());
  return m;
}

bool RegularPartition::sizes_balanced() const {
  if (classes.empty()) return true;
  std::size_t lo = classes[0].size(), hi = lo;
  for (const auto& c : classes) {
    lo = std::min(lo, c.size());
    hi = std::max(hi, c.size());
  }
  return hi - lo <= 1;
}

double RegularPartition::energy() const {
  std::size_t n = 0;
  for (const auto& c : classes) n += c.size();
  if (n == 0) return 0;
  double q = 0;
  for (const auto& r : pairs) {
    const double size = static_cast<double>(classes[r.i].size()) * static_cast<double>(classes[r.j].size());
    const double e = static_cast<double>(r.edges);
    if (size > 0) q += e * e / size;
  }
  return q / (static_cast<double>(n) * static_cast<double>(n));
}

RegularPartition partition_from_classes(const BitGraph& g, std::vector<std::vector<std::size_t>> classes,
                                        const PartitionConfig& config, bool certify) {
  if (config.epsilon <= 0 || config.epsilon >= 1)
    throw ParameterError("epsilon must lie in (0,1), got " + to_string(config.epsilon));
  std::vector<bool> seen(g.size(), false);
  for (auto& c : classes) {
    std::sort(c.begin(), c.end());
    for (auto v : c) {
      if (v >= g.size() || seen[v]) throw ParameterError("partition classes must be disjoint vertex sets of the graph");
      seen[v] = true;
    }
  }
  RegularPartition p;
  p.classes = std::move(classes);
  p.epsilon = config.epsilon;
  p.config = config;
  const std::size_t k = p.k();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) p.pairs.push_back(PairReport{i, j, 0, {}});
  parallel_for(p.pairs.size(), config.exact.threads, [&](std::size_t idx) {
    PairReport& r = p.pairs[idx];
    BipartitePair pair(g, p.classes[r.i], p.classes[r.j]);
    r.edges = pair.edges();
    if (!certify) {
      r.verdict.verdict = Verdict::assumed;
      r.verdict.density = density(pair);
    } else if (exact_feasible(pair.xs.size(), pair.ys.size(), config.epsilon, config.exact)) {
      ExactOptions single = config.exact;
      single.threads = 1;
      r.verdict = check_regular_exact(pair, config.epsilon, single);
    } else {
      r.verdict = check_regular_sampled(pair, config.epsilon, config.sampled_trials, derive_seed(config.seed, idx));
    }
  });
  p.status = PartitionStatus::unchecked;
  if (certify) {
    const auto& eps = config.epsilon;
    const auto kk = static_cast<std::int64_t>(k * k);
    p.status = Rational(static_cast<std::int64_t>(p.irregular_count())) <= eps * kk ? PartitionStatus::budget_met
                                                                                     : PartitionStatus::budget_unmet;
  }
  p.history.push_back({k, p.irregular_count(), p.undecided_count(), p.energy()});
  return p;
}

namespace {

std::vector<std::vector<std::size_t>> contiguous_equipartition(const std::vector<std::size_t>& vertices,
                                                               std::size_t parts) {
  std::vector<std::vector<std::size_t>> out(parts);
  const std::size_t n = vertices.size(), base = n / parts, extra = n % parts;
  std::size_t pos = 0;
  for (std::size_t c = 0; c < parts; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    out[c].assign(vertices.begin() + static_cast<std::ptrdiff_t>(pos),
                  vertices.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return out;
}

// Splits every class into `split` near-equal pieces after ordering its vertices by their
// membership pattern across this round's irregularity witnesses (stable in vertex order).
std::vector<std::vector<std::size_t>> refine(const RegularPartition& p, std::size_t split) {
  std::vector<std::vector<const std::vector<std::size_t>*>> witness_sets(p.k());
  for (const auto& r : p.pairs)
    if (r.verdict.verdict == Verdict::irregular && r.verdict.witness) {
      witness_sets[r.i].push_back(&r.verdict.witness->xs);
      witness_sets[r.j].push_back(&r.verdict.witness->ys);
    }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < p.k(); ++c) {
    const auto& members = p.classes[c];
    std::vector<std::vector<bool>> trace(members.size());
    for (std::size_t m = 0; m < members.size(); ++m)
      for (const auto* w : witness_sets[c]) trace[m].push_back(!std::binary_search(w->begin(), w->end(), members[m]));
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return trace[a] < trace[b]; });
    std::vector<std::size_t> sorted;
    for (auto o : order) sorted.push_back(members[o]);
    for (auto& piece : contiguous_equipartition(sorted, split)) {
      std::sort(piece.begin(), piece.end());
      out.push_back(std::move(piece));
    }
  }
  return out;
}

}  // namespace

RegularPartition regularity_partition(const BitGraph& g, const PartitionConfig& config) {
  if (config.m0 < 1 || g.size() < config.m0)
    throw ParameterError("regularity_partition: need 1 <= m0 <= |graph| (m0=" + std::to_string(config.m0) +
                         ", |graph|=" + std::to_string(g.size()) + ")");
  if (config.split < 2) throw ParameterError("regularity_partition: split >= 2 required");
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<RoundRecord> history;
  auto p = partition_from_classes(g, contiguous_equipartition(all, config.m0), config);
  while (true) {
    history.push_back(p.history.back());
    if (p.status == PartitionStatus::budget_met) break;
    if (p.k() * config.split > config.max_classes || p.min_class_size() < config.split) break;
    PartitionConfig next = config;
    next.seed = derive_seed(config.seed, history.size());
    p = partition_from_classes(g, refine(p, config.split), next);
    p.config = config;
  }
  p.history = std::move(history);
  return p;
}

ReducedGraph reduced_graph(const RegularPartition& p, const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw ParameterError("delta must lie in (0,1), got " + to_string(delta));
  ReducedGraph r;
  r.graph = BitGraph(p.k());
  r.delta = delta;
  r.epsilon = p.epsilon;
  for (const auto& c : p.classes) r.class_sizes.push_back(c.size());
  for (const auto& pr : p.pairs) {
    const auto v = pr.verdict.verdict;
    if ((v == Verdict::regular || v == Verdict::assumed) && pr.verdict.density >= delta) r.graph.add_edge(pr.i, pr.j);
  }
  return r;
}

BitGraph blow_up(const BitGraph& reduced, std::size_t t) {
  if (t < 1) throw ParameterError("blow_up: t >= 1 required");
  BitGraph g(reduced.size() * t);
  for (auto [i, j] : reduced.edges())
    for (std::size_t a = 0; a < t; ++a)
      for (std::size_t b = 0; b < t; ++b) g.add_edge(i * t + a, j * t + b);
  return g;
}

}  // namespace charlab
