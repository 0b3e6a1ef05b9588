#pragma once

#include "charlab/graph.hpp"
#include "charlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// A partition of the universe into classes.
class Equivalence {
 public:
  Equivalence() = default;
  // Throws FormatError unless the classes are disjoint, non-empty and cover 0..n-1.
  static Equivalence from_classes(std::size_t n, std::vector<std::vector<std::size_t>> classes);

  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  std::size_t class_of(std::size_t element) const { return class_of_[element]; }
  bool same(std::size_t a, std::size_t b) const { return class_of_[a] == class_of_[b]; }

 private:
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::size_t> class_of_;
};

// Finite universe 0..universe_size-1 with named relations. Binary relations are
// symmetric and loop-free; "parts" are labelled element lists used by the
// generators to expose their construction (sides of a half-graph, the X/Y/Z
// columns of a staged triangle-free construction, ...).
struct FiniteStructure {
  std::size_t universe_size = 0;
  std::map<std::string, BitGraph> relations;
  std::map<std::string, Bitset> unary;
  std::map<std::string, Equivalence> equivalences;
  std::map<std::string, std::size_t> constants;
  std::map<std::string, std::vector<std::size_t>> parts;
  std::optional<std::uint64_t> seed;

  // Throws FormatError naming the first broken invariant.
  void validate() const;

  // Lookups throw ParameterError when the symbol is absent.
  const BitGraph& relation(const std::string& name = "R") const;
  const Bitset& predicate(const std::string& name) const;
  const Equivalence& equivalence(const std::string& name) const;
  std::size_t constant(const std::string& name) const;
  const std::vector<std::size_t>& part(const std::string& label) const;

  bool operator==(const FiniteStructure&) const;
};

// Wraps a plain graph as a structure with relation "R" and constants 0, 1
// designated as elements 0 and 1 when the universe has at least two elements.
FiniteStructure structure_from_graph(BitGraph graph);

// --- generators ---------------------------------------------------------

FiniteStructure gen_random_graph(std::size_t n, const Rational& edge_prob, std::uint64_t seed);

struct TfrgOptions {
  std::size_t universe_cap = 1u << 14;
};

// Staged construction of three mutually random-looking, triangle-free parts
// X, Y, Z. Each stage adds, per part, one R-free element plus one element per
// non-empty subset (of size <= subset_cap) of each other part's previous
// stage, adjacent exactly to that subset. Parts are labelled "X", "Y", "Z" and
// the per-stage prefixes "X@s" (elements present after stage s).
FiniteStructure gen_tfrg_staged(std::size_t stages, std::size_t subset_cap, const TfrgOptions& options = {});

// Two crosscutting equivalences E (rows) and F (columns) over an
// E_classes x F_classes grid of cells; predicate P is constant on each cell. A
// half-graph pattern P(cell(r_i, c_j)) <=> i < j is planted on a seeded
// selection of min(E_classes, F_classes) rows/columns; other cells are random.
// The planted rows and columns are exposed as parts "a_rows" / "b_cols"
// (one representative element each, in order).
FiniteStructure gen_crosscutting(std::size_t e_classes, std::size_t f_classes, std::size_t cell_size, std::uint64_t seed);

// Half-graph H_k: a_1..a_k are elements 0..k-1, b_1..b_k are k..2k-1, R(a_i, b_j) iff i < j.
FiniteStructure gen_half_graph(std::size_t k);

// Parameters a^t_i (t < 2, i < width) plus one witness per choice function
// f: width -> {0,1}, adjacent to a^{f(i)}_i. The edge formula's characteristic
// sequence on the parameters is an (omega,2)-array fragment. Parts: "row0",
// "row1" (a^0_i, a^1_i in column order) and "witnesses".
FiniteStructure gen_ip_array(std::size_t width);

// The P_2 graph of a pure 2 x width array: complete except the width
// same-column pairs {a^0_i, a^1_i} = {2i, 2i+1}.
BitGraph array_p2_graph(std::size_t width);

// Linearly ordered thresholds c_lo..c_hi and points p_lo..p_hi with
// R(p_t, c_i) iff t < i. Under strict-order-rho, rho(p_t; c_i, c_j) iff
// i <= t < j. Parts: "chain" (c_lo..c_hi) and "points".
FiniteStructure gen_threshold_chain(std::int64_t lo, std::int64_t hi);

// Triangle-free sequence witnessing the 2-empty order property for R:
// a_i R b_j iff j <= i, each row R-free, plus one gap point g_t (t = 0..len)
// adjacent to the a_i with i < t and the b_j with j >= t, so a_i and b_j have a
// common neighbour iff i < j.
// Parts "a", "b" (indices lo..hi in order) and "gaps".
FiniteStructure gen_two_empty_order_chain(std::int64_t lo, std::int64_t hi);

// Appends one new element per R-independent subset S of `base` with
// |S| <= max_size, adjacent exactly to S. Keeps a triangle-free relation
// triangle-free. New elements are listed in part "closure".
FiniteStructure independent_set_closure(const FiniteStructure& s, const std::vector<std::size_t>& base,
                                        std::size_t max_size, std::size_t universe_cap = 1u << 15);

// Small named graphs used by tests and the CLI.
BitGraph complete_graph(std::size_t n);
BitGraph empty_graph(std::size_t n);
BitGraph cycle_graph(std::size_t n);
BitGraph star_graph(std::size_t leaves);  // hub is vertex 0
BitGraph complete_multipartite(const std::vector<std::size_t>& part_sizes);
// Paley graph on the prime q = 1 (mod 4).
BitGraph paley_graph(std::size_t q);

}  // namespace charlab
