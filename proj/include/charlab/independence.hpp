#pragma once

#include "charlab/counting.hpp"
#include "charlab/formula.hpp"
#include "charlab/graph.hpp"
#include "charlab/orderprops.hpp"
#include "charlab/structures.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// --- independence depth -------------------------------------------------

// Witnesses come from `members`; patterns are drawn from `core` (members when empty).
// For a staged construction the core is the previous stage, the only elements the
// last stage was built to be independent over.
struct IndependencePart {
  std::string label;
  std::vector<std::size_t> members;
  std::vector<std::size_t> core;
  const std::vector<std::size_t>& pattern_pool() const { return core.empty() ? members : core; }
};

// X, Y, Z of a staged triangle-free structure: members at the last stage, core one stage earlier.
std::vector<IndependencePart> tfrg_parts(const FiniteStructure& s);

struct Pattern {
  std::vector<std::size_t> eta, nu;  // element ids
};

struct DepthCheck {
  std::size_t part = 0;
  std::vector<std::size_t> others;
  bool holds = true;
  std::size_t patterns = 0;
  std::size_t failures = 0;
  std::optional<Pattern> failure;       // first unrealized pattern
  std::optional<Pattern> edge_failure;  // first unrealized pattern whose eta carries an R-edge
};

struct DepthReport {
  std::size_t k = 0, cap = 0;
  bool holds = true;
  std::vector<DepthCheck> checks;
  std::string label;
};

// For every part A_i and every k-1 other parts: each disjoint (eta, nu) over their pattern
// pools with at most `cap` elements taken from each other part is realized in A_i.
DepthReport independence_depth(const BitGraph& r, const std::vector<IndependencePart>& parts, std::size_t k,
                               std::size_t cap, unsigned threads = 1);

struct DepthProfile {
  std::size_t cap = 0;
  std::vector<std::pair<std::size_t, bool>> by_k;
  std::size_t max_k = 0;  // largest k passing (1 is vacuous)
  std::string label;
};

DepthProfile independence_profile(const BitGraph& r, const std::vector<IndependencePart>& parts, std::size_t cap,
                                  unsigned threads = 1);

// --- templates ------------------------------------------------------------

// Vertices x^t_j (t < h rows, j <= n columns); E_G is defined on cross-column pairs only.
class ConfigTemplate {
 public:
  ConfigTemplate() = default;
  ConfigTemplate(std::size_t h, std::size_t n);

  static ConfigTemplate uniform(std::size_t h, std::size_t n, bool value);
  static ConfigTemplate triangle() { return uniform(1, 2, true); }
  // Cross-column pairs in a fixed order; bit p of mask sets pair p.
  static ConfigTemplate from_mask(std::size_t h, std::size_t n, std::uint64_t mask);

  std::size_t h() const { return h_; }
  std::size_t n() const { return n_; }
  std::size_t vertices() const { return h_ * (n_ + 1); }
  std::size_t vertex(std::size_t t, std::size_t j) const { return t * (n_ + 1) + j; }
  // Throws ParameterError for same-column pairs.
  bool edge(std::size_t t, std::size_t i, std::size_t t2, std::size_t i2) const;
  void set_edge(std::size_t t, std::size_t i, std::size_t t2, std::size_t i2, bool value);
  std::vector<std::pair<std::size_t, std::size_t>> cross_pairs() const;  // vertex ids, u < v

  nlohmann::json to_json() const;
  static ConfigTemplate from_json(const nlohmann::json& j);

  friend bool operator==(const ConfigTemplate&, const ConfigTemplate&) = default;

 private:
  std::size_t h_ = 0, n_ = 0;
  std::vector<std::uint8_t> e_;
};

// Distinct elements x^t_j with R matching E_G on every cross-column pair.
std::optional<std::vector<std::size_t>> realize_template(const BitGraph& r, const ConfigTemplate& g,
                                                         std::size_t node_budget = 1u << 22);

using GraphFamily = std::function<BitGraph(std::uint64_t seed)>;

struct ForbiddenResult {
  SearchStatus status = SearchStatus::none;
  std::optional<ConfigTemplate> config;
  std::size_t corpus_size = 0;
  std::size_t templates_tried = 0;
  std::string certificate;
};

// First template (by height, then mask) realized by no structure in the seeded corpus.
ForbiddenResult find_forbidden_config(const GraphFamily& family, std::size_t n, std::size_t h_max,
                                      std::size_t corpus_size = 4, std::uint64_t seed = 0,
                                      std::size_t node_budget = 1u << 22);

// Disjoint union of every 4-vertex graph except the 4-cycle, relabelled by seed.
BitGraph four_cycle_free_graph(std::uint64_t seed);

// --- helix arrays ---------------------------------------------------------

using Block = std::vector<std::vector<std::size_t>>;  // h rows x (n + 1) columns

struct BlockArray {
  std::size_t n = 0, h = 0;
  std::vector<std::vector<std::size_t>> columns;  // A_0 .. A_n (extended elements appended)
  std::vector<std::vector<std::size_t>> rows;     // rows[rho][k] = a^rho_k
  BitGraph relation;                              // the relation the array lives in
  std::vector<std::size_t> extended;              // elements added by extension, in order

  std::size_t blocks() const { return h ? rows.size() / h : 0; }
  Block block(std::size_t l) const;
};

// Col(i) = columns other than i and i + 1 (mod n + 1).
bool in_col(std::size_t n, std::size_t i, std::size_t j);
// beta((rho2, k2), (rho, k)): earlier row with k2 in Col(k), or the same row with k2 < k and k2 in Col(k).
bool beta_before(std::size_t n, std::size_t rho2, std::size_t k2, std::size_t rho, std::size_t k);

struct ArrayOptions {
  bool extend = false;              // add a fresh element when no column member fits
  bool keep_triangle_free = true;   // refuse extensions whose eta carries an edge
  bool check_precondition = true;
  std::optional<std::size_t> precondition_cap;  // default h * (n - 1)
  std::size_t node_budget = 200000;  // backtracking nodes before giving up
};

// Elements chosen in helix order; each a^rho_k realizes the pattern fixed by E_G against
// the beta-earlier cells. Throws PreconditionError naming the unrealizable (eta, nu).
BlockArray build_array(const BitGraph& r, const std::vector<IndependencePart>& parts, const ConfigTemplate& g,
                       std::size_t num_rows, const ArrayOptions& options = {});

struct ArrayScan {
  bool holds = true;
  std::size_t pairs = 0;
  std::optional<std::array<std::size_t, 4>> failure;  // rho, k, rho2, k2
};

// Every beta-ordered pair against E_G, plus column membership.
ArrayScan verify_array(const BlockArray& a, const ConfigTemplate& g);

// Y <_l Z: z^t_i R y^t2_i2 iff E_G((t,i),(t2,i2)) for all i2 in Col(i).
bool less_ell(const Block& y, const Block& z, const ConfigTemplate& g, const BitGraph& r);

struct LoopReport {
  std::vector<std::size_t> blocks;  // W_0 .. W_n as candidate indices
  std::size_t m = 0;
  std::vector<std::pair<std::size_t, std::size_t>> verified;     // (j, i): W_j <_l W_i
  std::vector<std::pair<std::size_t, std::size_t>> constrained;  // column pairs in each other's scope
};

struct LoopSearch {
  SearchStatus status = SearchStatus::none;
  std::optional<LoopReport> loop;
  std::size_t nodes = 0;
};

// Distinct W_0..W_n from the candidates and 1 <= m < n with
// W_j <_l W_i (0 < j < i), W_0 <_l W_j (j <= m), W_j <_l W_0 (j > m).
LoopSearch pseudo_loop_search(const std::vector<Block>& candidates, const ConfigTemplate& g, const BitGraph& r,
                              std::size_t n, std::size_t node_budget = 1u << 24);

bool loop_valid(const LoopReport& loop, const std::vector<Block>& candidates, const ConfigTemplate& g,
                const BitGraph& r);

// Appends a block of fresh elements t with B_after <_l t <_l B_before (indices into the array).
Block plant_loop_block(BlockArray& a, const ConfigTemplate& g, std::size_t after, std::size_t before);
// Same, above every block in `after` and below every block in `before`.
Block plant_loop_block(BlockArray& a, const ConfigTemplate& g, const std::vector<std::size_t>& after,
                       const std::vector<std::size_t>& before);

struct Sop3FromArray {
  bool chain_ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> chain_failure;
  bool degenerate = false;
  std::string witness_source;
  std::string domain_note;
  FormulaSpec phi_r, psi_l;
  std::vector<Tuple> a_tuples;   // A_i: n consecutive blocks, flattened
  std::vector<Tuple> witnesses;  // interleaved spare blocks
  Sop3Verdict verdict;
  std::optional<LoopReport> c1_loop, c3_loop;
};

struct Sop3Options {
  bool interleave_witnesses = true;
  std::vector<Block> extra_objects;  // e.g. planted blocks, always in the x-domain
  std::size_t domain_budget = 1u << 18;
};

// phi_r(x; y_1..y_n) = y_i <_l y_j (i < j) and y_i <_l x; psi_l(x; y) = x <_l y_i and y_i <_l y_j (i < j).
Sop3FromArray sop3_from_array(const BlockArray& a, const ConfigTemplate& g, const Sop3Options& options = {});

nlohmann::json array_json(const BlockArray& a);
nlohmann::json loop_json(const LoopReport& loop, const std::vector<Block>& candidates);

}  // namespace charlab
