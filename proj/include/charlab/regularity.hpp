#pragma once

#include "charlab/graph.hpp"
#include "charlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace charlab {

// Disjoint vertex sets X, Y of a graph; the adjacency is read through the graph.
struct BipartitePair {
  const BitGraph* graph = nullptr;
  std::vector<std::size_t> xs, ys;

  BipartitePair(const BitGraph& g, std::vector<std::size_t> x, std::vector<std::size_t> y);
  BipartitePair(BitGraph&&, std::vector<std::size_t>, std::vector<std::size_t>) = delete;  // would dangle
  std::size_t edges() const;
  // Omitted cross pairs, |X||Y| - e(X,Y).
  std::size_t omitted() const { return xs.size() * ys.size() - edges(); }
};

// e(X,Y)/(|X||Y|), and 0 when a side is empty.
Rational density(const BipartitePair& pair);
Rational density(const BitGraph& g, std::span<const std::size_t> xs, std::span<const std::size_t> ys);

enum class Verdict { regular, irregular, undecided, assumed };
std::string to_string(Verdict v);

struct RegularityWitness {
  std::vector<std::size_t> xs, ys;  // X' subset of X, Y' subset of Y
  Rational density;                 // delta(X', Y')
  Rational gap;                     // |delta(X,Y) - delta(X',Y')|
};

struct PairVerdict {
  Verdict verdict = Verdict::undecided;
  Rational density;
  std::optional<RegularityWitness> witness;
  bool exact = false;
  std::size_t trials = 0;  // sampled mode only
};

struct ExactOptions {
  // Both sides within side_cap: always exact. Otherwise exact only if the smaller side has at
  // most 32 vertices and C(smaller side, threshold) <= subset_budget.
  std::size_t side_cap = 20;
  std::size_t subset_budget = std::size_t{1} << 24;
  unsigned threads = 1;
};

// Threshold size ceil(eps * side), at least 1 for a non-empty side.
std::size_t threshold_size(const Rational& epsilon, std::size_t side);
bool exact_feasible(std::size_t x_side, std::size_t y_side, const Rational& epsilon, const ExactOptions& options = {});

// Exhaustive evaluation of the regularity quantifier. Sub-densities over |X'| >= t_X, |Y'| >= t_Y
// reach their extremes at |X'| = t_X, |Y'| = t_Y, so it enumerates X' of that size on the smaller
// side and takes the top / bottom t_Y vertices of the other side by degree into X'. An irregular
// verdict carries the gap-maximizing witness. Throws BudgetError when exact_feasible is false.
PairVerdict check_regular_exact(const BipartitePair& pair, const Rational& epsilon, const ExactOptions& options = {});

// Random threshold-size X' (resp. Y') with the best response on the other side. Never answers
// "regular": the result is irregular (with witness) or undecided.
PairVerdict check_regular_sampled(const BipartitePair& pair, const Rational& epsilon, std::size_t trials,
                                  std::uint64_t seed);

// Exact re-validation of an irregularity witness against the definition.
bool witness_valid(const BipartitePair& pair, const Rational& epsilon, const RegularityWitness& w);

// --- partitions ---------------------------------------------------------

struct PartitionConfig {
  Rational epsilon{1, 4};
  std::size_t m0 = 4;
  std::size_t max_classes = 1024;  // stands in for the proof's b_{eps,l}
  std::size_t split = 2;           // each refinement splits every class into this many pieces
  std::size_t sampled_trials = 200;
  std::uint64_t seed = 0;
  ExactOptions exact;
};

struct PairReport {
  std::size_t i = 0, j = 0;
  std::size_t edges = 0;
  PairVerdict verdict;
};

struct RoundRecord {
  std::size_t classes = 0;
  std::size_t irregular = 0;
  std::size_t undecided = 0;
  double energy = 0;
};

enum class PartitionStatus { budget_met, budget_unmet, unchecked };
std::string to_string(PartitionStatus s);

struct RegularPartition {
  std::vector<std::vector<std::size_t>> classes;
  Rational epsilon;
  std::vector<PairReport> pairs;  // i < j, row-major
  PartitionStatus status = PartitionStatus::unchecked;
  std::vector<RoundRecord> history;
  PartitionConfig config;

  std::size_t k() const { return classes.size(); }
  const PairReport& pair(std::size_t i, std::size_t j) const;
  std::size_t irregular_count() const;
  std::size_t undecided_count() const;
  std::size_t min_class_size() const;
  bool sizes_balanced() const;  // max - min <= 1
  // Sum over pairs of |X_i||X_j| d_ij^2 / n^2; lies in [0, 1/2).
  double energy() const;
};

// Certifies every pair (exact where feasible, sampled otherwise). With certify = false the
// pairs get verdict "assumed" and only densities are computed; the caller owns that claim.
RegularPartition partition_from_classes(const BitGraph& g, std::vector<std::vector<std::size_t>> classes,
                                        const PartitionConfig& config, bool certify = true);

// Energy-increment refinement from the contiguous equipartition into m0 classes.
RegularPartition regularity_partition(const BitGraph& g, const PartitionConfig& config);

struct ReducedGraph {
  BitGraph graph;
  Rational delta, epsilon;
  std::vector<std::size_t> class_sizes;
};

// Edge (i,j) iff the pair is regular (or assumed regular) with density >= delta.
ReducedGraph reduced_graph(const RegularPartition& p, const Rational& delta);
// R(t): class i becomes vertices i*t .. i*t+t-1, empty inside, complete across reduced edges.
BitGraph blow_up(const BitGraph& reduced, std::size_t t);

// --- Key Lemma ----------------------------------------------------------

// eps0 = (delta - eps)^Delta / (2 + Delta).
Rational key_lemma_eps0(const Rational& delta, const Rational& epsilon, std::size_t max_degree);

struct Embedding {
  std::vector<std::size_t> map;  // H-vertex -> graph vertex
  Rational d, eps0;
  std::size_t max_degree = 0;
  std::size_t blow_up_height = 0;                 // t: most H-vertices sharing one class
  std::vector<std::vector<std::size_t>> candidate_sizes;  // per step, per H-vertex
};

// Greedy embedding of H into G through the partition, H-vertex h placed in class assignment[h].
// H must be a subgraph of R(t): H-vertices sharing a class are non-adjacent and every H-edge
// lands on a reduced edge. Throws PreconditionError naming the failed inequality (eps <= eps0,
// t - 1 <= eps0 m, certified irregular or sparse pairs). Returns nullopt if the greedy choice
// runs out of candidates, which the lemma excludes only asymptotically.
std::optional<Embedding> key_lemma_embed(const BitGraph& g, const RegularPartition& p, const Rational& delta,
                                         const BitGraph& h, const std::vector<std::size_t>& assignment);

// True iff the map is injective and every H-edge maps to a G-edge.
bool embedding_valid(const BitGraph& g, const BitGraph& h, const std::vector<std::size_t>& map);

struct EmptyPair {
  std::vector<std::size_t> xs, ys;
  std::size_t class_i = 0, class_j = 0;
};

// K_{t,t} in the dual through the first class pair (row-major) whose dual density is >= delta,
// giving t x t vertex sets with no edges of G between them. nullopt when no class pair
// qualifies or the greedy embedding fails.
std::optional<EmptyPair> empty_pair_embed_dual(const BitGraph& g, const RegularPartition& p, const Rational& delta,
                                               std::size_t t);

// --- interstitial accounting -------------------------------------------

struct InterstitialPair {
  std::size_t i = 0, j = 0, size_i = 0, size_j = 0, omitted = 0;
};

struct InterstitialReport {
  std::size_t interstitial_omitted = 0;  // non-edges between distinct classes
  std::size_t internal_omitted = 0;      // non-edges inside classes
  std::vector<InterstitialPair> per_pair;
  // eps + (1 - eps)(1 - delta_min) < c * l / l', delta_min over regular pairs.
  Rational delta_min;
  Rational lhs, rhs;
  bool inequality_holds = false;
};

InterstitialReport interstitial_report(const BitGraph& g, const RegularPartition& p, const Rational& c,
                                       std::size_t ell, std::size_t ell_prime);

struct LedgerLevel {
  std::size_t level = 0;
  std::size_t components = 0;         // classes produced at this level
  std::size_t min_k = 0, max_k = 0;   // class counts used when splitting
  std::size_t interstitial_omitted = 0;
  std::size_t truncated = 0;          // components too small to split further
};

struct HierarchicalLedger {
  std::vector<LedgerLevel> levels;
  std::size_t bottom_internal_omitted = 0;
  std::size_t total_omitted = 0;  // e-hat(G)
  bool reconciles = false;
  // c n^2 (1 + 1/k_1 + 1/k_2^2 + ...) + n^2 / k_t^t with k_i the smallest class count at level i.
  double telescoped_bound = 0;
  Rational c;
};

HierarchicalLedger hierarchical_decomposition(const BitGraph& g, const PartitionConfig& config, std::size_t depth,
                                              const Rational& c = Rational(1, 10));

struct SpectrumRow {
  std::size_t size = 0;
  std::vector<std::size_t> xs, ys;
  Rational density;
  bool exact = false;
};

// Seeded random balanced disjoint pairs of each size (X from side_a and Y from side_b when
// given, else both from the whole vertex set), keeping only exactly certified regular pairs.
// Identical pairs are reported once.
std::vector<SpectrumRow> density_spectrum(const BitGraph& g, const std::vector<std::size_t>& sizes,
                                          const Rational& epsilon, std::size_t trials, std::uint64_t seed,
                                          const std::vector<std::size_t>& side_a = {},
                                          const std::vector<std::size_t>& side_b = {},
                                          const ExactOptions& options = {});

}  // namespace charlab
