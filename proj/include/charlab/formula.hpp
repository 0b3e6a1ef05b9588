#pragma once

#include "charlab/structures.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace charlab {

using Tuple = std::vector<std::size_t>;

// phi(x; y) with x of length object_arity and y of length parameter_arity.
struct FormulaSpec {
  using Evaluator =
      std::function<bool(const FiniteStructure&, std::span<const std::size_t> x, std::span<const std::size_t> y)>;

  std::string name;
  std::size_t parameter_arity = 1;
  std::size_t object_arity = 1;
  Evaluator evaluator;

  // Throws ArityError on length mismatch, ParameterError on out-of-universe entries.
  bool eval(const FiniteStructure& s, std::span<const std::size_t> x, std::span<const std::size_t> y) const;
};

// edge, common-neighbor, semi-compatible-psi, crosscut-psi, strict-order-rho.
FormulaSpec builtin_formula(std::string_view name);
std::vector<std::string> builtin_formula_names();

// All x-tuples (lexicographic) satisfying phi(x; y) for every y in ys.
// Enumerates |M|^object_arity tuples; throws BudgetError above `budget`.
std::vector<Tuple> realizers(const FiniteStructure& s, const FormulaSpec& f, std::span<const Tuple> ys,
                             std::size_t limit = static_cast<std::size_t>(-1), std::size_t budget = 1u << 24);

}  // namespace charlab
