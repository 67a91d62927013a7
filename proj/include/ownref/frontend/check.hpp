#pragma once

#include "ownref/frontend/ast.hpp"

namespace ownref::frontend {

// Alpha-renames duplicate binders, then enforces closedness, label uniqueness,
// callee existence/arity and distinct call arguments. Throws WellFormednessError.
Program check_program(const Program& p);

} // namespace ownref::frontend
