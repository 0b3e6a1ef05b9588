#include "charlab/formula.hpp"

#include "charlab/error.hpp"

namespace charlab {

bool FormulaSpec::eval(const FiniteStructure& s, std::span<const std::size_t> x,
                       std::span<const std::size_t> y) const {
  if (x.size() != object_arity || y.size() != parameter_arity)
    throw ArityError(name + ": expected x of length " + std::to_string(object_arity) + " and y of length " +
                     std::to_string(parameter_arity) + ", got " + std::to_string(x.size()) + " and " +
                     std::to_string(y.size()));
  for (auto v : x)
    if (v >= s.universe_size) throw ParameterError(name + ": element " + std::to_string(v) + " outside universe");
  for (auto v : y)
    if (v >= s.universe_size) throw ParameterError(name + ": element " + std::to_string(v) + " outside universe");
  return evaluator(s, x, y);
}

namespace {

using Span = std::span<const std::size_t>;

FormulaSpec make(std::string name, std::size_t params, FormulaSpec::Evaluator ev) {
  return FormulaSpec{std::move(name), params, 1, std::move(ev)};
}

}  // namespace

FormulaSpec builtin_formula(std::string_view name) {
  if (name == "edge")
    return make("edge", 1, [](const FiniteStructure& s, Span x, Span y) { return s.relation().has_edge(x[0], y[0]); });
  if (name == "common-neighbor")
    return make("common-neighbor", 2, [](const FiniteStructure& s, Span x, Span y) {
      const auto& r = s.relation();
      return r.has_edge(x[0], y[0]) && r.has_edge(x[0], y[1]);
    });
  if (name == "semi-compatible-psi")
    return make("semi-compatible-psi", 2, [](const FiniteStructure& s, Span x, Span y) {
      if (y[1] == s.constant("0")) return x[0] == y[0];
      return s.relation().has_edge(x[0], y[0]);
    });
  if (name == "crosscut-psi")
    // P is read at x: with P(y) the first coordinate of the pair would not depend on x at all.
    return make("crosscut-psi", 2, [](const FiniteStructure& s, Span x, Span y) {
      const Equivalence& eq = s.equivalence(y[1] == s.constant("0") ? "E" : "F");
      return eq.same(x[0], y[0]) && s.predicate("P").test(x[0]);
    });
  if (name == "strict-order-rho")
    return make("strict-order-rho", 2, [](const FiniteStructure& s, Span x, Span y) {
      const auto& r = s.relation();
      return !r.has_edge(x[0], y[0]) && r.has_edge(x[0], y[1]);
    });
  throw ParameterError("unknown formula '" + std::string(name) + "'; known: edge, common-neighbor, "
                       "semi-compatible-psi, crosscut-psi, strict-order-rho");
}

std::vector<std::string> builtin_formula_names() {
  return {"edge", "common-neighbor", "semi-compatible-psi", "crosscut-psi", "strict-order-rho"};
}

std::vector<Tuple> realizers(const FiniteStructure& s, const FormulaSpec& f, std::span<const Tuple> ys,
                             std::size_t limit, std::size_t budget) {
  const std::size_t n = s.universe_size;
  std::size_t total = 1;
  for (std::size_t i = 0; i < f.object_arity; ++i) {
    if (n != 0 && total > budget / n)
      throw BudgetError(f.name + ": enumerating " + std::to_string(n) + "^" + std::to_string(f.object_arity) +
                        " object tuples exceeds budget " + std::to_string(budget));
    total *= n;
  }
  std::vector<Tuple> out;
  if (n == 0 || limit == 0) return out;
  for (const auto& y : ys)
    if (y.size() != f.parameter_arity)
      throw ArityError(f.name + ": parameter tuple of length " + std::to_string(y.size()) + ", expected " +
                       std::to_string(f.parameter_arity));
  Tuple x(f.object_arity, 0);
  for (std::size_t c = 0; c < total; ++c) {
    bool ok = true;
    for (const auto& y : ys)
      if (!f.eval(s, x, y)) {
        ok = false;
        break;
      }
    if (ok) {
      out.push_back(x);
      if (out.size() >= limit) break;
    }
    for (std::size_t i = f.object_arity; i-- > 0;) {
      if (++x[i] < n) break;
      x[i] = 0;
    }
  }
  return out;
}

}  // namespace charlab
