#include "charlab/graph.hpp"

#include "charlab/kernels.hpp"

#include <bit>

namespace charlab {

Bitset Bitset::full(std::size_t bits) {
  Bitset b(bits);
  for (auto& w : b.words_) w = ~std::uint64_t{0};
  if (bits % 64 != 0 && !b.words_.empty()) b.words_.back() = (std::uint64_t{1} << (bits % 64)) - 1;
  return b;
}

Bitset Bitset::of(std::size_t bits, std::span<const std::size_t> members) {
  Bitset b(bits);
  for (auto m : members) b.set(m);
  return b;
}

std::size_t Bitset::count() const { return kernels::popcount(words_); }

bool Bitset::any() const {
  for (auto w : words_)
    if (w) return true;
  return false;
}

std::size_t Bitset::next(std::size_t from) const {
  if (from >= bits_) return npos;
  std::size_t w = from >> 6;
  std::uint64_t word = words_[w] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (word) return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
    if (++w >= words_.size()) return npos;
    word = words_[w];
  }
}

std::vector<std::size_t> Bitset::members() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

Bitset& Bitset::operator&=(const Bitset& other) {
  kernels::and_assign(words_, other.words_);
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& other) {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Bitset& Bitset::and_not(const Bitset& other) {
  kernels::andnot_assign(words_, other.words_);
  return *this;
}

Bitset Bitset::complement() const {
  Bitset out = full(bits_);
  out.and_not(*this);
  return out;
}

std::size_t and_count(const Bitset& a, const Bitset& b) { return kernels::and_popcount(a.words(), b.words()); }

void BitGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) return;
  rows_[u].set(v);
  rows_[v].set(u);
}

void BitGraph::remove_edge(std::size_t u, std::size_t v) {
  rows_[u].reset(v);
  rows_[v].reset(u);
}

std::size_t BitGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& r : rows_) twice += r.count();
  return twice / 2;
}

std::size_t BitGraph::omitted_count() const {
  const std::size_t n = size();
  return n * (n - (n > 0 ? 1 : 0)) / 2 - edge_count();
}

BitGraph BitGraph::dual() const {
  BitGraph out(size());
  for (std::size_t v = 0; v < size(); ++v) {
    out.rows_[v] = rows_[v].complement();
    out.rows_[v].reset(v);
  }
  return out;
}

BitGraph BitGraph::induced(std::span<const std::size_t> vertices) const {
  BitGraph out(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (has_edge(vertices[i], vertices[j])) out.add_edge(i, j);
  return out;
}

void BitGraph::grow(std::size_t extra) {
  const std::size_t n = size() + extra;
  std::vector<Bitset> rows(n, Bitset(n));
  for (std::size_t v = 0; v < rows_.size(); ++v) rows_[v].for_each([&](std::size_t u) { rows[v].set(u); });
  rows_ = std::move(rows);
}

std::size_t BitGraph::edges_between(std::span<const std::size_t> xs, const Bitset& ys) const {
  std::size_t total = 0;
  for (auto x : xs) total += and_count(rows_[x], ys);
  return total;
}

std::size_t BitGraph::edges_between(std::span<const std::size_t> xs, std::span<const std::size_t> ys) const {
  return edges_between(xs, Bitset::of(size(), ys));
}

std::size_t BitGraph::edges_within(std::span<const std::size_t> xs) const {
  return edges_between(xs, Bitset::of(size(), xs)) / 2;
}

std::size_t BitGraph::triangle_count() const {
  std::size_t total = 0;
  for (std::size_t u = 0; u < size(); ++u)
    rows_[u].for_each([&](std::size_t v) {
      if (v <= u) return;
      // common neighbours w > v
      Bitset common = rows_[u];
      common &= rows_[v];
      for (std::size_t w = common.next(v + 1); w != Bitset::npos; w = common.next(w + 1)) ++total;
    });
  return total;
}

std::optional<std::array<std::size_t, 3>> BitGraph::find_triangle() const {
  for (std::size_t u = 0; u < size(); ++u) {
    for (std::size_t v = rows_[u].next(u + 1); v != Bitset::npos; v = rows_[u].next(v + 1)) {
      Bitset common = rows_[u];
      common &= rows_[v];
      if (auto w = common.next(v + 1); w != Bitset::npos) return std::array<std::size_t, 3>{u, v, w};
    }
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> BitGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < size(); ++u)
    for (std::size_t v = rows_[u].next(u + 1); v != Bitset::npos; v = rows_[u].next(v + 1)) out.emplace_back(u, v);
  return out;
}

bool BitGraph::is_symmetric_loop_free() const {
  for (std::size_t u = 0; u < size(); ++u) {
    if (rows_[u].size() != size() || rows_[u].test(u)) return false;
    bool ok = true;
    rows_[u].for_each([&](std::size_t v) { ok = ok && rows_[v].test(u); });
    if (!ok) return false;
  }
  return true;
}

}  // namespace charlab
