#pragma once

#include "ownref/frontend/ast.hpp"

#include <functional>
#include <string>

namespace ownref::frontend {

std::string pretty(const Program& p);
std::string pretty(const Expr& e, int indent = 0);

using NameMap = std::function<std::string(const std::string&)>;

// One-line rendering of the outermost construct, subterms elided as `...`.
std::string redex_head(const Expr& e, const NameMap& name);

} // namespace ownref::frontend
