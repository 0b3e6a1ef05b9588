#pragma once

#include "charlab/graph.hpp"
#include "charlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// Search budgets; echoed into reports so exact and lower-bound numbers stay distinguishable.
struct CountingBudget {
  std::size_t subset_budget = std::size_t{1} << 22;  // C(|V|, n) allowed for alpha_exact (covers |V|=24, n=12)
  std::size_t clique_cap = 60;                       // exact max_empty_graph up to this many vertices
  std::size_t empty_pair_exact = 24;                 // exact empty_pair_search when 2t <= this
  std::size_t node_budget = std::size_t{1} << 24;    // heuristic search nodes
  unsigned threads = 1;
};

struct AlphaResult {
  std::size_t n = 0;
  std::size_t value = 0;               // omitted edges inside the witness
  std::vector<std::size_t> witness;    // sorted n-subset
  bool exact = false;
};

// max { e-hat(X) : |X| = n } by branch and bound (lowest index first). Throws BudgetError
// when C(|V|, n) exceeds the subset budget, directing callers to alpha_lower.
AlphaResult alpha_exact(const BitGraph& g, std::size_t n, const CountingBudget& budget = {});

enum class AlphaStrategy { greedy, sampled };

// A concrete n-subset, hence a lower bound. Greedy adds the vertex with the fewest neighbours
// in the current set; sampled runs seeded random restarts of that greedy followed by swap search.
AlphaResult alpha_lower(const BitGraph& g, std::size_t n, AlphaStrategy strategy, std::uint64_t seed = 0,
                        std::size_t restarts = 64);

// (1 - 1/(k-1)) n^2 / 2.
Rational turan_upper(std::size_t k, std::size_t n);

struct TuranCheck {
  bool applicable = false;  // max empty graph < k
  std::size_t max_empty = 0;
  std::size_t alpha = 0;
  Rational bound;
  bool holds = true;
};

TuranCheck turan_consistency(const BitGraph& g, std::size_t k, std::size_t n, const CountingBudget& budget = {});

struct EmptyGraphResult {
  std::size_t size = 0;
  std::vector<std::size_t> witness;
  bool exact = false;
};

// Maximum independent set (clique of the dual); exact up to budget.clique_cap vertices, greedy beyond.
EmptyGraphResult max_empty_graph(const BitGraph& g, const CountingBudget& budget = {});

enum class SearchStatus { found, none, not_found };
std::string to_string(SearchStatus s);

struct EmptyPairResult {
  SearchStatus status = SearchStatus::none;
  std::vector<std::size_t> xs, ys;
};

// Disjoint X, Y with |X| = |Y| = t and no edges across. Exhaustive when 2t <= empty_pair_exact
// ("none" is then a proof of absence); budgeted otherwise ("not-found").
EmptyPairResult empty_pair_search(const BitGraph& g, std::size_t t, const CountingBudget& budget = {});

struct OmissionRow {
  std::size_t n = 0;
  AlphaResult alpha;
  Rational turan_upper;  // for the configured k
  std::size_t floor_half = 0;
};

struct OmissionProfile {
  std::size_t k = 0;
  std::vector<OmissionRow> rows;
  bool monotone = true;  // alpha(n) <= alpha(n+1) <= alpha(n) + n over consecutive exact rows
};

OmissionProfile omission_profile(const BitGraph& g, const std::vector<std::size_t>& ns, std::size_t k,
                                 const CountingBudget& budget = {}, std::uint64_t seed = 0);

enum class Regime { quadratic_with_empty_pair, subquadratic };
std::string to_string(Regime r);

struct RegimeRow {
  std::size_t n = 0;
  std::size_t alpha = 0;
  bool alpha_exact = false;
  double ratio = 0;               // alpha / n^2
  std::size_t empty_pair = 0;     // largest t found
  bool empty_pair_exact = false;
};

struct RegimeEvidence {
  Regime regime = Regime::subquadratic;
  std::vector<RegimeRow> rows;
  std::string rule;
};

// Quadratic regime iff alpha(n) >= n^2/4 at every n and the largest empty pair grows across the
// list; otherwise subquadratic. Finite evidence only.
RegimeEvidence regime_classify(const std::function<BitGraph(std::size_t)>& family, const std::vector<std::size_t>& ns,
                               const CountingBudget& budget = {}, std::uint64_t seed = 0);

}  // namespace charlab
