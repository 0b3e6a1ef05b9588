#pragma once

#include "charlab/formula.hpp"
#include "charlab/graph.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace charlab {

// Finite fragment of the characteristic sequence P_n(z_1..z_n) = exists x AND_i phi(x; z_i)
// over an explicit pool of parameter tuples. Arguments are pool indices and may repeat.
// The structure is referenced, not copied, and must outlive the CharSeq.
class CharSeq {
 public:
  const FiniteStructure& structure() const { return *structure_; }
  const FormulaSpec& formula() const { return formula_; }
  std::size_t max_level() const { return max_level_; }
  std::size_t pool_size() const { return pool_.size(); }
  const std::vector<Tuple>& pool() const { return pool_; }
  const Tuple& tuple(std::size_t i) const { return pool_[i]; }

  // Object tuples are encoded in base |M| (lexicographic); satisfying(i) is the set
  // of encoded x with phi(x; pool[i]).
  std::size_t object_space() const { return object_space_; }
  const Bitset& satisfying(std::size_t i) const { return sat_[i]; }
  Tuple decode(std::size_t code) const;

  bool p1(std::size_t i) const { return p1_.test(i); }
  bool p2(std::size_t i, std::size_t j) const { return p2_[i].test(j); }
  // Level-n membership for n = args.size() <= max_level (computed on demand above 2).
  bool holds(std::span<const std::size_t> args) const;
  // One realizing x-tuple, the lexicographically least.
  std::optional<Tuple> witness(std::span<const std::size_t> args) const;

  // Sorted multisets in P_n. Levels 1 and 2 are materialized; higher levels enumerate.
  std::vector<std::vector<std::size_t>> level_members(std::size_t n, std::size_t budget = 1u << 22) const;
  // P_2 as a loop-free graph on pool indices (loops dropped, per the graph convention).
  BitGraph p2_graph() const;

  // {"levels": {"1": [...], "2": [[i,j],...]}, "witnesses": {"i": x, "i,j": x}}.
  nlohmann::json to_json() const;

  friend CharSeq compute_charseq(const FiniteStructure&, const FormulaSpec&, std::size_t, std::vector<Tuple>,
                                 unsigned);

 private:
  void check_level(std::size_t n) const;

  const FiniteStructure* structure_ = nullptr;
  FormulaSpec formula_;
  std::size_t max_level_ = 0;
  std::vector<Tuple> pool_;
  std::size_t object_space_ = 0;
  std::vector<Bitset> sat_;
  Bitset p1_;
  std::vector<Bitset> p2_;
};

// Throws ArityError on tuple/formula mismatch, ParameterError when max_level < 1,
// BudgetError when |M|^object_arity is too large to enumerate.
CharSeq compute_charseq(const FiniteStructure& s, const FormulaSpec& f, std::size_t max_level,
                        std::vector<Tuple> pool, unsigned threads = 1);

// All ordered pairs / tuples over the universe, a convenience for building pools.
std::vector<Tuple> all_tuples(std::size_t universe, std::size_t arity);
std::vector<Tuple> singletons(std::span<const std::size_t> elements);

struct SupportVerdict {
  bool holds = true;
  std::optional<std::vector<std::size_t>> counterexample;  // an n-multiset violating the biconditional
  std::size_t checked = 0;
};

// Support k at level n: P_n(T) iff P_k holds on every k-element sub-multiset of T, for all n-multisets T.
SupportVerdict support_check(const CharSeq& cs, std::size_t k, std::size_t n, std::size_t budget = 1u << 24);

struct BaseSetVerdict {
  bool holds = false;
  std::optional<Tuple> witness;
};

BaseSetVerdict positive_base_set_check(const CharSeq& cs, std::span<const std::size_t> members);

// rows[t][i] = pool index of a^t_i.
struct ArrayFragment {
  std::array<std::vector<std::size_t>, 2> rows;
  std::size_t width() const { return rows[0].size(); }
};

struct ArrayVerdict {
  bool holds = true;
  // Violating selection as (row, column) cells, with expected and observed P_n.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  bool expected = false;
  bool observed = false;
  std::size_t checked = 0;
};

// P_n(a^{t_1}_{i_1}, ..., a^{t_n}_{i_n}) iff no column appears with both rows, over all n-multisets of cells.
ArrayVerdict omega2_array_check(const CharSeq& cs, const ArrayFragment& frag, std::size_t n);

struct InvariantReport {
  std::size_t tuples_checked = 0;
  std::size_t symmetry_failures = 0;
  std::size_t closure_failures = 0;
};

// Permutation symmetry (each ordering evaluated directly against the formula) and downward
// closure over all multisets of size <= n. Intended for small pools.
InvariantReport check_charseq_invariants(const CharSeq& cs, std::size_t n);

// Direct evaluation of P_n without the cached satisfying sets; the reference oracle.
bool naive_holds(const FiniteStructure& s, const FormulaSpec& f, std::span<const Tuple> args);

// Visits every sorted multiset of size n over [0, universe). Stops early if visit returns false.
template <class Visit>
void for_each_multiset(std::size_t universe, std::size_t n, Visit&& visit) {
  if (n == 0) {
    std::vector<std::size_t> none;
    visit(none);
    return;
  }
  if (universe == 0) return;
  std::vector<std::size_t> m(n, 0);
  while (true) {
    if (!visit(m)) return;
    std::size_t i = n;
    while (i > 0 && m[i - 1] == universe - 1) --i;
    if (i == 0) return;
    ++m[i - 1];
    for (std::size_t j = i; j < n; ++j) m[j] = m[i - 1];
  }
}

// Visits every k-subset (as sorted index lists) of [0, n). Stops early if visit returns false.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!visit(c)) return;
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace charlab
