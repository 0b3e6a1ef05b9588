#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace charlab {

// Fixed-size bitset over 64-bit words; the tail bits of the last word stay zero.
class Bitset {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  static Bitset full(std::size_t bits);
  static Bitset of(std::size_t bits, std::span<const std::size_t> members);

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool value) { value ? set(i) : reset(i); }

  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }
  std::size_t first() const { return next(0); }
  // Smallest set index >= from, or npos.
  std::size_t next(std::size_t from) const;
  std::vector<std::size_t> members() const;

  Bitset& operator&=(const Bitset& other);
  Bitset& operator|=(const Bitset& other);
  Bitset& and_not(const Bitset& other);
  Bitset complement() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        f(w * 64 + static_cast<std::size_t>(__builtin_ctzll(word)));
        word &= word - 1;
      }
    }
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t and_count(const Bitset& a, const Bitset& b);

// Simple undirected graph on vertices 0..n-1: symmetric, loop-free adjacency rows.
class BitGraph {
 public:
  BitGraph() = default;
  explicit BitGraph(std::size_t n) : rows_(n, Bitset(n)) {}

  std::size_t size() const { return rows_.size(); }
  bool has_edge(std::size_t u, std::size_t v) const { return rows_[u].test(v); }
  // Loops are ignored, matching the convention that graphs never count them.
  void add_edge(std::size_t u, std::size_t v);
  void remove_edge(std::size_t u, std::size_t v);
  void set_edge(std::size_t u, std::size_t v, bool present) { present ? add_edge(u, v) : remove_edge(u, v); }

  const Bitset& neighbors(std::size_t v) const { return rows_[v]; }
  std::size_t degree(std::size_t v) const { return rows_[v].count(); }

  std::size_t edge_count() const;
  // ê(G): unordered pairs of distinct vertices that are not edges.
  std::size_t omitted_count() const;

  // Inverts every edge between distinct vertices.
  BitGraph dual() const;
  BitGraph induced(std::span<const std::size_t> vertices) const;
  // Appends isolated vertices; existing adjacency is preserved.
  void grow(std::size_t extra);

  // e(X,Y) for disjoint X, Y.
  std::size_t edges_between(std::span<const std::size_t> xs, const Bitset& ys) const;
  std::size_t edges_between(std::span<const std::size_t> xs, std::span<const std::size_t> ys) const;
  // e(X) for the subgraph induced on X.
  std::size_t edges_within(std::span<const std::size_t> xs) const;

  std::size_t triangle_count() const;
  std::optional<std::array<std::size_t, 3>> find_triangle() const;

  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_symmetric_loop_free() const;

  friend bool operator==(const BitGraph&, const BitGraph&) = default;

 private:
  std::vector<Bitset> rows_;
};

// Directed relation on 0..n-1 (loops allowed), used for SOP_n cycle checks.
class BitDigraph {
 public:
  BitDigraph() = default;
  explicit BitDigraph(std::size_t n) : rows_(n, Bitset(n)) {}

  std::size_t size() const { return rows_.size(); }
  bool has_arc(std::size_t from, std::size_t to) const { return rows_[from].test(to); }
  void add_arc(std::size_t from, std::size_t to) { rows_[from].set(to); }
  const Bitset& successors(std::size_t v) const { return rows_[v]; }

 private:
  std::vector<Bitset> rows_;
};

}  // namespace charlab
