#include "charlab/charseq.hpp"

#include "charlab/error.hpp"
#include "charlab/parallel.hpp"

#include <algorithm>

namespace charlab {

namespace {

std::size_t multiset_count(std::size_t universe, std::size_t n, std::size_t cap) {
  // C(universe + n - 1, n), saturating at cap + 1.
  if (universe == 0) return n == 0 ? 1 : 0;
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    r = r * (universe - 1 + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::size_t>(r);
}

Bitset intersect(const CharSeq& cs, std::span<const std::size_t> args) {
  Bitset acc = Bitset::full(cs.object_space());
  for (auto a : args) acc &= cs.satisfying(a);
  return acc;
}

}  // namespace

Tuple CharSeq::decode(std::size_t code) const {
  const std::size_t n = structure_->universe_size;
  Tuple x(formula_.object_arity);
  for (std::size_t i = x.size(); i-- > 0;) {
    x[i] = code % n;
    code /= n;
  }
  return x;
}

void CharSeq::check_level(std::size_t n) const {
  if (n > max_level_)
    throw ParameterError("level " + std::to_string(n) + " requested above max level " + std::to_string(max_level_));
}

bool CharSeq::holds(std::span<const std::size_t> args) const {
  check_level(args.size());
  for (auto a : args)
    if (a >= pool_.size()) throw ParameterError("tuple index " + std::to_string(a) + " outside pool");
  switch (args.size()) {
    case 0:
      return object_space_ > 0;
    case 1:
      return p1_.test(args[0]);
    case 2:
      return p2_[args[0]].test(args[1]);
    default:
      return intersect(*this, args).any();
  }
}

std::optional<Tuple> CharSeq::witness(std::span<const std::size_t> args) const {
  check_level(args.size());
  Bitset acc = intersect(*this, args);
  std::size_t code = acc.first();
  if (code == Bitset::npos) return std::nullopt;
  return decode(code);
}

std::vector<std::vector<std::size_t>> CharSeq::level_members(std::size_t n, std::size_t budget) const {
  check_level(n);
  if (multiset_count(pool_.size(), n, budget) > budget)
    throw BudgetError("level " + std::to_string(n) + " enumeration exceeds budget " + std::to_string(budget));
  std::vector<std::vector<std::size_t>> out;
  for_each_multiset(pool_.size(), n, [&](const std::vector<std::size_t>& m) {
    if (holds(m)) out.push_back(m);
    return true;
  });
  return out;
}

BitGraph CharSeq::p2_graph() const {
  BitGraph g(pool_.size());
  for (std::size_t i = 0; i < pool_.size(); ++i)
    p2_[i].for_each([&](std::size_t j) {
      if (j > i) g.add_edge(i, j);
    });
  return g;
}

nlohmann::json CharSeq::to_json() const {
  nlohmann::json j;
  j["formula"] = formula_.name;
  j["max_level"] = max_level_;
  j["pool"] = pool_;
  nlohmann::json witnesses = nlohmann::json::object();
  std::vector<std::size_t> l1;
  for (std::size_t i = 0; i < pool_.size(); ++i)
    if (p1_.test(i)) {
      l1.push_back(i);
      witnesses[std::to_string(i)] = decode(sat_[i].first());
    }
  nlohmann::json l2 = nlohmann::json::array();
  for (std::size_t i = 0; i < pool_.size(); ++i)
    for (std::size_t jx = i; jx < pool_.size(); ++jx)
      if (p2_[i].test(jx)) {
        l2.push_back({i, jx});
        std::size_t args[2] = {i, jx};
        witnesses[std::to_string(i) + "," + std::to_string(jx)] = *witness(args);
      }
  j["levels"] = {{"1", l1}, {"2", l2}};
  j["witnesses"] = std::move(witnesses);
  return j;
}

CharSeq compute_charseq(const FiniteStructure& s, const FormulaSpec& f, std::size_t max_level,
                        std::vector<Tuple> pool, unsigned threads) {
  if (max_level < 1) throw ParameterError("compute_charseq: max level N >= 1 required");
  for (const auto& t : pool) {
    if (t.size() != f.parameter_arity)
      throw ArityError(f.name + ": parameter tuple of length " + std::to_string(t.size()) + ", expected " +
                       std::to_string(f.parameter_arity));
    for (auto v : t)
      if (v >= s.universe_size) throw ParameterError("parameter element " + std::to_string(v) + " outside universe");
  }
  constexpr std::size_t kObjectBudget = std::size_t{1} << 22;
  std::size_t space = 1;
  for (std::size_t i = 0; i < f.object_arity; ++i) {
    if (s.universe_size != 0 && space > kObjectBudget / s.universe_size)
      throw BudgetError(f.name + ": object space |M|^" + std::to_string(f.object_arity) + " exceeds budget");
    space *= s.universe_size;
  }

  CharSeq cs;
  cs.structure_ = &s;
  cs.formula_ = f;
  cs.max_level_ = max_level;
  cs.pool_ = std::move(pool);
  cs.object_space_ = space;
  const std::size_t p = cs.pool_.size();
  cs.sat_.assign(p, Bitset(space));
  parallel_for(p, threads, [&](std::size_t i) {
    for (std::size_t code = 0; code < space; ++code)
      if (f.evaluator(s, cs.decode(code), cs.pool_[i])) cs.sat_[i].set(code);
  });
  cs.p1_ = Bitset(p);
  for (std::size_t i = 0; i < p; ++i)
    if (cs.sat_[i].any()) cs.p1_.set(i);
  cs.p2_.assign(p, Bitset(p));
  if (max_level >= 2) {
    parallel_for(p, threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < p; ++j)
        if (cs.p1_.test(i) && cs.p1_.test(j) && and_count(cs.sat_[i], cs.sat_[j]) > 0) cs.p2_[i].set(j);
    });
  }
  return cs;
}

std::vector<Tuple> all_tuples(std::size_t universe, std::size_t arity) {
  std::vector<Tuple> out;
  if (universe == 0) return out;
  Tuple t(arity, 0);
  while (true) {
    out.push_back(t);
    std::size_t i = arity;
    while (i > 0 && t[i - 1] == universe - 1) t[--i] = 0;
    if (i == 0) return out;
    ++t[i - 1];
  }
}

std::vector<Tuple> singletons(std::span<const std::size_t> elements) {
  std::vector<Tuple> out;
  for (auto e : elements) out.push_back({e});
  return out;
}

SupportVerdict support_check(const CharSeq& cs, std::size_t k, std::size_t n, std::size_t budget) {
  if (k > n || n > cs.max_level())
    throw ParameterError("support_check: need k <= n <= max level (k=" + std::to_string(k) + ", n=" +
                         std::to_string(n) + ")");
  if (multiset_count(cs.pool_size(), n, budget) > budget)
    throw BudgetError("support_check: n-multisets exceed budget " + std::to_string(budget));
  SupportVerdict v;
  std::vector<std::size_t> sub(k);
  for_each_multiset(cs.pool_size(), n, [&](const std::vector<std::size_t>& t) {
    ++v.checked;
    const bool lhs = cs.holds(t);
    bool rhs = true;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& pos) {
      for (std::size_t i = 0; i < k; ++i) sub[i] = t[pos[i]];
      rhs = cs.holds(sub);
      return rhs;
    });
    if (lhs != rhs) {
      v.holds = false;
      v.counterexample = t;
      return false;
    }
    return true;
  });
  return v;
}

BaseSetVerdict positive_base_set_check(const CharSeq& cs, std::span<const std::size_t> members) {
  Bitset acc = Bitset::full(cs.object_space());
  for (auto a : members) {
    if (a >= cs.pool_size()) throw ParameterError("positive_base_set_check: index outside pool");
    acc &= cs.satisfying(a);
  }
  BaseSetVerdict v;
  std::size_t code = acc.first();
  if (code != Bitset::npos) {
    v.holds = true;
    v.witness = cs.decode(code);
  }
  return v;
}

ArrayVerdict omega2_array_check(const CharSeq& cs, const ArrayFragment& frag, std::size_t n) {
  if (frag.rows[0].size() != frag.rows[1].size()) throw ParameterError("array fragment rows differ in width");
  if (n > cs.max_level()) throw ParameterError("omega2_array_check: level above max level");
  const std::size_t w = frag.width();
  ArrayVerdict v;
  std::vector<std::size_t> args(n);
  for_each_multiset(2 * w, n, [&](const std::vector<std::size_t>& cells) {
    ++v.checked;
    bool expected = true;
    for (std::size_t a = 0; a < n && expected; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (cells[a] % w == cells[b] % w && cells[a] / w != cells[b] / w) {
          expected = false;
          break;
        }
    for (std::size_t a = 0; a < n; ++a) args[a] = frag.rows[cells[a] / w][cells[a] % w];
    const bool observed = cs.holds(args);
    if (observed != expected) {
      v.holds = false;
      v.expected = expected;
      v.observed = observed;
      for (auto c : cells) v.cells.emplace_back(c / w, c % w);
      return false;
    }
    return true;
  });
  return v;
}

bool naive_holds(const FiniteStructure& s, const FormulaSpec& f, std::span<const Tuple> args) {
  const std::size_t n = s.universe_size;
  Tuple x(f.object_arity, 0);
  if (n == 0) return false;
  while (true) {
    bool all = true;
    for (const auto& y : args)
      if (!f.evaluator(s, x, y)) {
        all = false;
        break;
      }
    if (all) return true;
    std::size_t i = f.object_arity;
    while (i > 0 && x[i - 1] == n - 1) x[--i] = 0;
    if (i == 0) return false;
    ++x[i - 1];
  }
}

InvariantReport check_charseq_invariants(const CharSeq& cs, std::size_t n) {
  InvariantReport r;
  std::vector<Tuple> args;
  for (std::size_t size = 1; size <= std::min(n, cs.max_level()); ++size) {
    for_each_multiset(cs.pool_size(), size, [&](const std::vector<std::size_t>& m) {
      ++r.tuples_checked;
      const bool value = cs.holds(m);
      std::vector<std::size_t> perm = m;
      do {
        args.clear();
        for (auto i : perm) args.push_back(cs.tuple(i));
        if (naive_holds(cs.structure(), cs.formula(), args) != value) {
          ++r.symmetry_failures;
          break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (value && size > 1) {
        std::vector<std::size_t> sub;
        for (std::size_t drop = 0; drop < size; ++drop) {
          sub.assign(m.begin(), m.end());
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          if (!cs.holds(sub)) {
            ++r.closure_failures;
            break;
          }
        }
      }
      return true;
    });
  }
  return r;
}

}  // namespace charlab
