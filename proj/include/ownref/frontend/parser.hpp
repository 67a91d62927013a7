#pragma once

#include "ownref/frontend/ast.hpp"

#include <string_view>

namespace ownref::frontend {

surface::Program parse(std::string_view source);

// Standalone formula, as written inside assert(...).
logic::Formula parse_formula(std::string_view source);

} // namespace ownref::frontend
