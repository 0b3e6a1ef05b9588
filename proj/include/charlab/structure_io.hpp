#pragma once

#include "charlab/structures.hpp"

#include <json.hpp>

#include <string>

namespace charlab {

// {"n", "relations", "unary", "equivalences", "constants", "parts", "seed"}.
nlohmann::json structure_to_json(const FiniteStructure& s);
// Validates every invariant; throws FormatError with the offending field.
FiniteStructure structure_from_json(const nlohmann::json& j);

FiniteStructure load_structure(const std::string& path);
void save_structure(const FiniteStructure& s, const std::string& path);

}  // namespace charlab
