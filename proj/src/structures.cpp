#include "charlab/structures.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <numeric>

namespace charlab {

Equivalence Equivalence::from_classes(std::size_t n, std::vector<std::vector<std::size_t>> classes) {
  Equivalence e;
  e.class_of_.assign(n, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw FormatError("equivalence class " + std::to_string(c) + " is empty");
    for (auto v : classes[c]) {
      if (v >= n) throw FormatError("equivalence member " + std::to_string(v) + " outside universe");
      if (e.class_of_[v] != static_cast<std::size_t>(-1))
        throw FormatError("element " + std::to_string(v) + " lies in two equivalence classes");
      e.class_of_[v] = c;
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (e.class_of_[v] == static_cast<std::size_t>(-1))
      throw FormatError("element " + std::to_string(v) + " is in no equivalence class");
  for (auto& c : classes) std::sort(c.begin(), c.end());
  e.classes_ = std::move(classes);
  return e;
}

void FiniteStructure::validate() const {
  for (const auto& [name, g] : relations) {
    if (g.size() != universe_size) throw FormatError("relation " + name + " has the wrong size");
    if (!g.is_symmetric_loop_free()) throw FormatError("relation " + name + " is not symmetric and loop-free");
  }
  for (const auto& [name, p] : unary)
    if (p.size() != universe_size) throw FormatError("predicate " + name + " has the wrong size");
  for (const auto& [name, e] : equivalences) {
    std::size_t covered = 0;
    for (const auto& c : e.classes()) covered += c.size();
    if (covered != universe_size) throw FormatError("equivalence " + name + " does not cover the universe");
  }
  for (const auto& [name, c] : constants)
    if (c >= universe_size) throw FormatError("constant " + name + " outside universe");
  for (const auto& [label, members] : parts)
    for (auto v : members)
      if (v >= universe_size) throw FormatError("part " + label + " has element outside universe");
}

const BitGraph& FiniteStructure::relation(const std::string& name) const {
  auto it = relations.find(name);
  if (it == relations.end()) throw ParameterError("structure has no relation '" + name + "'");
  return it->second;
}

const Bitset& FiniteStructure::predicate(const std::string& name) const {
  auto it = unary.find(name);
  if (it == unary.end()) throw ParameterError("structure has no predicate '" + name + "'");
  return it->second;
}

const Equivalence& FiniteStructure::equivalence(const std::string& name) const {
  auto it = equivalences.find(name);
  if (it == equivalences.end()) throw ParameterError("structure has no equivalence '" + name + "'");
  return it->second;
}

std::size_t FiniteStructure::constant(const std::string& name) const {
  auto it = constants.find(name);
  if (it == constants.end()) throw ParameterError("structure has no constant '" + name + "'");
  return it->second;
}

const std::vector<std::size_t>& FiniteStructure::part(const std::string& label) const {
  auto it = parts.find(label);
  if (it == parts.end()) throw ParameterError("structure has no part '" + label + "'");
  return it->second;
}

bool FiniteStructure::operator==(const FiniteStructure& o) const {
  if (universe_size != o.universe_size || relations != o.relations || unary != o.unary || constants != o.constants ||
      parts != o.parts || seed != o.seed || equivalences.size() != o.equivalences.size())
    return false;
  for (const auto& [name, e] : equivalences) {
    auto it = o.equivalences.find(name);
    if (it == o.equivalences.end() || it->second.classes() != e.classes()) return false;
  }
  return true;
}

namespace {

void designate_constants(FiniteStructure& s) {
  if (s.universe_size >= 2) {
    s.constants["0"] = 0;
    s.constants["1"] = 1;
  }
}

}  // namespace

FiniteStructure structure_from_graph(BitGraph graph) {
  FiniteStructure s;
  s.universe_size = graph.size();
  s.relations.emplace("R", std::move(graph));
  designate_constants(s);
  return s;
}

FiniteStructure gen_random_graph(std::size_t n, const Rational& edge_prob, std::uint64_t seed) {
  if (n < 1) throw ParameterError("gen_random_graph: n >= 1 required");
  if (edge_prob < 0 || edge_prob > 1) throw ParameterError("gen_random_graph: edge probability must lie in [0,1]");
  Rng rng(seed);
  BitGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(edge_prob)) g.add_edge(u, v);
  auto s = structure_from_graph(std::move(g));
  s.seed = seed;
  return s;
}

namespace {

// Calls f on every non-empty subset of `pool` with at most cap elements, by size then lexicographically.
template <class F>
void for_each_small_subset(const std::vector<std::size_t>& pool, std::size_t cap, F&& f) {
  std::vector<std::size_t> idx;
  for (std::size_t size = 1; size <= std::min(cap, pool.size()); ++size) {
    idx.resize(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<std::size_t> subset(size);
      for (std::size_t i = 0; i < size; ++i) subset[i] = pool[idx[i]];
      f(subset);
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == pool.size() - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

FiniteStructure gen_tfrg_staged(std::size_t stages, std::size_t subset_cap, const TfrgOptions& options) {
  if (subset_cap < 1) throw ParameterError("gen_tfrg_staged: subset_cap >= 1 required");
  const char* names[3] = {"X", "Y", "Z"};
  std::vector<std::size_t> part[3] = {{0}, {1}, {2}};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t next = 3;
  std::map<std::string, std::vector<std::size_t>> labels;
  for (int p = 0; p < 3; ++p) labels[std::string(names[p]) + "@0"] = part[p];

  for (std::size_t stage = 1; stage <= stages; ++stage) {
    std::size_t growth = 0;
    for (int p = 0; p < 3; ++p) {
      growth += 1;
      for (int q = 0; q < 3; ++q) {
        if (q == p) continue;
        for (std::size_t size = 1; size <= std::min(subset_cap, part[q].size()); ++size)
          growth += binomial_capped(part[q].size(), size, options.universe_cap);
      }
    }
    if (next + growth > options.universe_cap)
      throw CapacityError("gen_tfrg_staged: universe cap " + std::to_string(options.universe_cap) +
                          " exceeded while building stage " + std::to_string(stage) + " (completed stage " +
                          std::to_string(stage - 1) + ", " + std::to_string(next) + " elements)");
    std::vector<std::size_t> snapshot[3] = {part[0], part[1], part[2]};
    for (int p = 0; p < 3; ++p) {
      part[p].push_back(next++);  // the R-free element x_emptyset
      for (int q = 0; q < 3; ++q) {
        if (q == p) continue;
        for_each_small_subset(snapshot[q], subset_cap, [&](const std::vector<std::size_t>& tau) {
          std::size_t x = next++;
          part[p].push_back(x);
          for (auto y : tau) edges.emplace_back(x, y);
        });
      }
    }
    for (int p = 0; p < 3; ++p) labels[std::string(names[p]) + "@" + std::to_string(stage)] = part[p];
  }

  BitGraph g(next);
  for (auto [u, v] : edges) g.add_edge(u, v);
  auto s = structure_from_graph(std::move(g));
  for (int p = 0; p < 3; ++p) s.parts[names[p]] = part[p];
  for (auto& [label, members] : labels) s.parts[label] = std::move(members);
  return s;
}

FiniteStructure gen_crosscutting(std::size_t e_classes, std::size_t f_classes, std::size_t cell_size,
                                 std::uint64_t seed) {
  if (e_classes < 2 || f_classes < 2 || cell_size < 1)
    throw ParameterError("gen_crosscutting: class counts >= 2 and cell_size >= 1 required");
  const std::size_t n = e_classes * f_classes * cell_size;
  auto element = [&](std::size_t r, std::size_t c, std::size_t s) { return (r * f_classes + c) * cell_size + s; };

  FiniteStructure st;
  st.universe_size = n;
  st.seed = seed;
  std::vector<std::vector<std::size_t>> rows(e_classes), cols(f_classes);
  for (std::size_t r = 0; r < e_classes; ++r)
    for (std::size_t c = 0; c < f_classes; ++c)
      for (std::size_t s = 0; s < cell_size; ++s) {
        rows[r].push_back(element(r, c, s));
        cols[c].push_back(element(r, c, s));
      }
  st.equivalences.emplace("E", Equivalence::from_classes(n, std::move(rows)));
  st.equivalences.emplace("F", Equivalence::from_classes(n, std::move(cols)));

  Rng rng(seed);
  std::vector<std::size_t> row_order(e_classes), col_order(f_classes);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::iota(col_order.begin(), col_order.end(), 0);
  rng.shuffle(row_order);
  rng.shuffle(col_order);
  const std::size_t k = std::min(e_classes, f_classes);
  std::vector<int> cell(e_classes * f_classes, -1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) cell[row_order[i] * f_classes + col_order[j]] = i < j ? 1 : 0;
  Bitset p(n);
  for (std::size_t r = 0; r < e_classes; ++r)
    for (std::size_t c = 0; c < f_classes; ++c) {
      int& value = cell[r * f_classes + c];
      if (value < 0) value = rng.bernoulli(Rational(1, 2)) ? 1 : 0;
      if (value)
        for (std::size_t s = 0; s < cell_size; ++s) p.set(element(r, c, s));
    }
  st.unary.emplace("P", std::move(p));

  std::vector<std::size_t> a_rows, b_cols;
  for (std::size_t i = 0; i < k; ++i) {
    a_rows.push_back(element(row_order[i], 0, 0));
    b_cols.push_back(element(0, col_order[i], 0));
  }
  st.parts["a_rows"] = std::move(a_rows);
  st.parts["b_cols"] = std::move(b_cols);
  designate_constants(st);
  return st;
}

FiniteStructure gen_half_graph(std::size_t k) {
  if (k < 1) throw ParameterError("gen_half_graph: k >= 1 required");
  BitGraph g(2 * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) g.add_edge(i, k + j);
  auto s = structure_from_graph(std::move(g));
  std::vector<std::size_t> a(k), b(k);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), k);
  s.parts["A"] = std::move(a);
  s.parts["B"] = std::move(b);
  return s;
}

FiniteStructure gen_ip_array(std::size_t width) {
  if (width < 1 || width > 20) throw ParameterError("gen_ip_array: 1 <= width <= 20 required");
  const std::size_t witnesses = std::size_t{1} << width;
  BitGraph g(2 * width + witnesses);
  std::vector<std::size_t> row0, row1, wit;
  for (std::size_t i = 0; i < width; ++i) {
    row0.push_back(2 * i);
    row1.push_back(2 * i + 1);
  }
  for (std::size_t f = 0; f < witnesses; ++f) {
    std::size_t x = 2 * width + f;
    wit.push_back(x);
    for (std::size_t i = 0; i < width; ++i) g.add_edge(x, 2 * i + ((f >> i) & 1));
  }
  auto s = structure_from_graph(std::move(g));
  s.parts["row0"] = std::move(row0);
  s.parts["row1"] = std::move(row1);
  s.parts["witnesses"] = std::move(wit);
  return s;
}

BitGraph array_p2_graph(std::size_t width) {
  BitGraph g = complete_graph(2 * width);
  for (std::size_t i = 0; i < width; ++i) g.remove_edge(2 * i, 2 * i + 1);
  return g;
}

FiniteStructure gen_threshold_chain(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("gen_threshold_chain: lo <= hi required");
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  BitGraph g(2 * len);
  std::vector<std::size_t> chain(len), points(len);
  for (std::size_t i = 0; i < len; ++i) {
    chain[i] = i;
    points[i] = len + i;
  }
  for (std::size_t t = 0; t < len; ++t)
    for (std::size_t i = t + 1; i < len; ++i) g.add_edge(points[t], chain[i]);
  auto s = structure_from_graph(std::move(g));
  s.parts["chain"] = std::move(chain);
  s.parts["points"] = std::move(points);
  return s;
}

FiniteStructure gen_two_empty_order_chain(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("gen_two_empty_order_chain: lo <= hi required");
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  // a at 0..len-1, b at len..2len-1, gap point t (between index t-1 and t, t = 0..len) at 2len+t.
  BitGraph g(3 * len + 1);
  std::vector<std::size_t> a(len), b(len), gaps(len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    a[i] = i;
    b[i] = len + i;
  }
  for (std::size_t t = 0; t <= len; ++t) gaps[t] = 2 * len + t;
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j <= i; ++j) g.add_edge(a[i], b[j]);
  // Gap point t sits just below index t: a_i with i < t and b_j with j >= t.
  for (std::size_t t = 0; t <= len; ++t) {
    for (std::size_t i = 0; i < t; ++i) g.add_edge(gaps[t], a[i]);
    for (std::size_t j = t; j < len; ++j) g.add_edge(gaps[t], b[j]);
  }
  auto s = structure_from_graph(std::move(g));
  s.parts["a"] = std::move(a);
  s.parts["b"] = std::move(b);
  s.parts["gaps"] = std::move(gaps);
  return s;
}

FiniteStructure independent_set_closure(const FiniteStructure& s, const std::vector<std::size_t>& base,
                                        std::size_t max_size, std::size_t universe_cap) {
  if (!s.equivalences.empty()) throw ParameterError("independent_set_closure: structures with equivalences unsupported");
  const BitGraph& r = s.relation("R");
  std::vector<std::vector<std::size_t>> sets;
  for_each_small_subset(base, max_size, [&](const std::vector<std::size_t>& subset) {
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = i + 1; j < subset.size(); ++j)
        if (r.has_edge(subset[i], subset[j])) return;
    sets.push_back(subset);
    if (s.universe_size + sets.size() > universe_cap)
      throw CapacityError("independent_set_closure: universe cap " + std::to_string(universe_cap) + " exceeded");
  });
  FiniteStructure out = s;
  out.universe_size = s.universe_size + sets.size();
  for (auto& [name, g] : out.relations) g.grow(sets.size());
  for (auto& [name, p] : out.unary) {
    Bitset grown(out.universe_size);
    p.for_each([&](std::size_t v) { grown.set(v); });
    p = std::move(grown);
  }
  std::vector<std::size_t> closure;
  BitGraph& g = out.relations.at("R");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::size_t x = s.universe_size + k;
    closure.push_back(x);
    for (auto v : sets[k]) g.add_edge(x, v);
  }
  out.parts["closure"] = std::move(closure);
  return out;
}

BitGraph complete_graph(std::size_t n) {
  BitGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

BitGraph empty_graph(std::size_t n) { return BitGraph(n); }

BitGraph cycle_graph(std::size_t n) {
  if (n < 3) throw ParameterError("cycle_graph: n >= 3 required");
  BitGraph g(n);
  for (std::size_t v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

BitGraph star_graph(std::size_t leaves) {
  BitGraph g(leaves + 1);
  for (std::size_t v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

BitGraph complete_multipartite(const std::vector<std::size_t>& part_sizes) {
  std::size_t n = std::accumulate(part_sizes.begin(), part_sizes.end(), std::size_t{0});
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < part_sizes.size(); ++p) owner.insert(owner.end(), part_sizes[p], p);
  BitGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (owner[u] != owner[v]) g.add_edge(u, v);
  return g;
}

BitGraph paley_graph(std::size_t q) {
  if (q < 5 || q % 4 != 1) throw ParameterError("paley_graph: prime q = 1 mod 4 required");
  for (std::size_t d = 2; d * d <= q; ++d)
    if (q % d == 0) throw ParameterError("paley_graph: q must be prime");
  std::vector<bool> square(q, false);
  for (std::size_t x = 1; x < q; ++x) square[(x * x) % q] = true;
  BitGraph g(q);
  for (std::size_t u = 0; u < q; ++u)
    for (std::size_t v = u + 1; v < q; ++v)
      if (square[(v - u) % q]) g.add_edge(u, v);
  return g;
}

}  // namespace charlab
