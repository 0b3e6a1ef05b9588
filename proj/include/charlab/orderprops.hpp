#pragma once

#include "charlab/charseq.hpp"
#include "charlab/counting.hpp"
#include "charlab/formula.hpp"
#include "charlab/graph.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// --- half-graphs --------------------------------------------------------

struct HalfGraphFragment {
  std::vector<std::size_t> a, b;  // R(a_i, b_j) iff i < j
  bool verified = false;
};

// Exhaustive check of the biconditional; elements must be pairwise distinct.
bool verify_half_graph(const BitGraph& r, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

struct HalfGraphOptions {
  std::size_t exact_universe = 24;
  std::size_t exact_k = 8;
  std::size_t restarts = 32;
  std::size_t node_budget = 200000;  // per restart in heuristic mode
  std::uint64_t seed = 0;
  // Optional domains for the a- and b-elements; empty means the whole vertex set.
  std::vector<std::size_t> a_domain, b_domain;
};

struct HalfGraphResult {
  SearchStatus status = SearchStatus::none;
  HalfGraphFragment fragment;
  bool exact = false;
};

// Backtracking over (a_1, b_1, a_2, b_2, ...) when |V| <= exact_universe and k <= exact_k;
// otherwise budgeted restarts over degree-sorted candidate orders ("not-found" on failure).
HalfGraphResult find_half_graph(const BitGraph& r, std::size_t k, const HalfGraphOptions& options = {});

// Largest k with a half-graph of length k (searching k = 1, 2, ... up to |V|/2).
std::size_t max_half_graph_length(const BitGraph& r, const HalfGraphOptions& options = {});

// --- compatible / empty order properties --------------------------------

// Rows a, b of pool indices. P_{2m} on a selection of m a's and m b's must hold iff the largest
// a-key is below the smallest b-key; keys default to 2i for a_i and 2j for b_j (i.e. i < j).
struct CopFragment {
  std::vector<std::size_t> alpha, beta;
  std::vector<std::int64_t> alpha_keys, beta_keys;
  std::size_t depth = 0;
  bool verified = false;

  static CopFragment from_rows(std::vector<std::size_t> a, std::vector<std::size_t> b);
  // Longest alternating subsequence b <- a <- b ... usable as strict a_i, b_j with i < j.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> to_strict_pairs() const;
};

struct Selection {
  std::vector<std::size_t> a, b;  // row positions (0-based)
};

struct OrderVerdict {
  bool holds = true;
  bool vacuous = false;
  std::optional<Selection> violation;
  bool expected = false, observed = false;
  bool used_support2 = false;
  std::size_t checked = 0;
  std::string detail;
};

// Mixed selections for every m' <= m, and every selection of up to 2m elements inside one
// row (rows must be P-complete). With support2 the check is reduced to pairs, which is sound
// when support_check(cs, 2, l) passes for l <= 2m; the verdict records whether that ran.
OrderVerdict verify_cop(const CharSeq& cs, const CopFragment& frag, std::size_t m, bool support2 = false);

// c_i for integer i in [lo, lo + first.size()); (c_i, c_j) is the parameter tuple (first_i, second_j).
struct OrderedBase {
  std::int64_t lo = 0;
  std::vector<std::size_t> first, second;
  std::int64_t hi() const { return lo + static_cast<std::int64_t>(first.size()) - 1; }
};

struct CopBuild {
  std::vector<Tuple> pool;  // alpha_1..alpha_n then beta_1..beta_n
  CopFragment fragment;     // indices into pool
  std::vector<std::pair<std::int64_t, std::int64_t>> alpha_index, beta_index;
};

// alpha_i = (c_{2i-1}, c_{4n-2i+1}), beta_i = (c_{-2i}, c_{2i}), 1 <= i <= n.
std::pair<std::vector<std::pair<std::int64_t, std::int64_t>>, std::vector<std::pair<std::int64_t, std::int64_t>>>
cop_index_formulas(std::size_t n);

// Checks the hypotheses first: exists x rho(x; c_i, c_j) iff i < j over the whole base, and
// the two-fold conjunctions of (2); throws PreconditionError citing the violating indices.
// Keys: alpha_i -> 2i, beta_j -> 2j + 1, since the formulas give P(alpha_i, beta_j) iff i <= j.
CopBuild build_cop_from_ordered(const FiniteStructure& s, const FormulaSpec& rho, const OrderedBase& base,
                                std::size_t n);

// (i) P_2(a_i, b_j) iff i < j, (ii) no n-selection of distinct positions inside a row is in P_n.
OrderVerdict verify_empty_op(const CharSeq& cs, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                             std::size_t n);

nlohmann::json fragment_json(const std::string& kind, const std::vector<std::size_t>& a,
                             const std::vector<std::size_t>& b, std::size_t depth, bool verified);

// --- patterns -----------------------------------------------------------

// Least element x (from domain, or the whole universe) outside eta and nu with R(x, b_j) for
// j in eta and not R(x, b_k) for k in nu. eta and nu index into b_seq.
std::optional<std::size_t> pattern_realization(const BitGraph& r, const std::vector<std::size_t>& b_seq,
                                               const std::vector<std::size_t>& eta,
                                               const std::vector<std::size_t>& nu,
                                               const std::vector<std::size_t>& domain = {});

struct PatternBatch {
  bool all_realized = true;
  std::size_t patterns = 0;
  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> failure;  // (eta, nu)
};

// Every disjoint (eta, nu) over b_seq with |eta| + |nu| <= s.
PatternBatch pattern_realization_batch(const BitGraph& r, const std::vector<std::size_t>& b_seq, std::size_t s,
                                       const std::vector<std::size_t>& domain = {});

// --- SOP_3 / SOP_n ------------------------------------------------------

struct ConditionVerdict {
  bool holds = true;
  bool checked = true;
  std::string detail;
  std::optional<std::size_t> i, j;
  std::optional<Tuple> x;
  std::vector<std::pair<std::size_t, std::size_t>> failures;  // every failing (i, j), first one above
};

struct Sop3Verdict {
  ConditionVerdict c1, c2, c3;
  std::string note;
  bool all() const { return c1.holds && c2.holds && c3.holds; }
};

// Conditions (1)-(3) over the listed parameter blocks. Realizers range over `domain` when
// given, else over the whole object space; "contradictory" means no realizer there.
// Condition (2) is skipped (checked = false) when no witnesses are supplied.
Sop3Verdict check_sop3_fragment(const FiniteStructure& s, const FormulaSpec& phi, const FormulaSpec& psi,
                                const std::vector<Tuple>& a_blocks, const std::vector<Tuple>& c_witnesses,
                                const std::vector<Tuple>& domain = {});

struct CopToSop3 {
  FormulaSpec phi, psi;
  std::vector<Tuple> blocks;     // (alpha_i, beta_i) concatenated
  std::vector<Tuple> witnesses;  // c_j found by search, one per block when realizable
  OrderVerdict precondition;
  Sop3Verdict verdict;
  // For each condition (3) failure at (i, j): whether P_2(alpha_j, beta_i) holds there.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, bool>> cross_report;
};

// phi(x; y, z) = theta(x; y) and not theta(x; z), psi(x; y, z) = theta(x; z), blocks from the
// fragment's strict pairs. Throws PreconditionError unless verify_cop passes at `depth`;
// with enforce = false the failed precondition is only recorded (for planted defects).
CopToSop3 cop_to_sop3(const CharSeq& cs, const CopFragment& frag, std::size_t depth, bool enforce = true);

struct SopnVerdict {
  bool chain_holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> chain_failure;  // positions i < j
  bool cycle_found = false;
  std::vector<std::size_t> cycle;  // x_0 .. x_{n-1}, phi(x_m, x_{m+1 mod n})
};

// Condition (1) on the chain, condition (2) by exhaustive search for a closed phi-walk of length n.
SopnVerdict sopn_cycle_check(const BitDigraph& phi, const std::vector<std::size_t>& chain, std::size_t n);

BitDigraph digraph_from_formula(const FiniteStructure& s, const FormulaSpec& f);

}  // namespace charlab
