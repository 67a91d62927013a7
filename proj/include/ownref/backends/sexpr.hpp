#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ownref::backends {

// S-expressions as printed by SMT solvers. `|quoted|` symbols lose their bars.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

// Parses every top-level expression in `text`. Throws Error on malformed input.
std::vector<SExpr> parse_sexprs(std::string_view text);

std::string to_string(const SExpr& e);

// Numeric value of a model term: 3, 2.0, (- 1), (/ 1.0 3.0), (- (/ 1 2)).
std::optional<mpq_class> rational_value(const SExpr& e);

} // namespace ownref::backends
