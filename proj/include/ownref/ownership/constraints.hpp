#pragma once

#include "ownref/frontend/ast.hpp"
#include "ownref/typing/templates.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace ownref::ownership {

using Rational = mpq_class;

struct Term {
  int var = -1;          // -1 for a constant
  Rational constant;

  static Term of(int v) { return Term{v, 0}; }
  static Term value(Rational c) { return Term{-1, std::move(c)}; }
  bool is_var() const { return var >= 0; }
};

struct Constraint {
  enum class Kind { Eq, Sum, Geq, ZeroImplies };
  Kind kind = Kind::Eq;
  Term a, b, c;          // Eq: a = b; Sum: a = b + c; Geq: a >= b; ZeroImplies: a = 0 => b = 0
  std::string origin;
};

// Variables 0..n-1 range over [0, 1]. The first variables are the template
// ownership variables; alias shuffles append auxiliary totals.
struct System {
  std::vector<std::string> vars;
  std::vector<Constraint> constraints;
};

using Assignment = std::vector<Rational>;

System generate_ownership_constraints(const Program& p, const typing::TemplateEnv& env);

// Index of the first constraint or bound the assignment violates.
std::optional<std::size_t> first_violation(const System& s, const Assignment& a);
std::string describe(const System& s, const Constraint& c);

std::size_t count_positive(const Assignment& a);
std::string format_assignment(const System& s, const Assignment& a);

} // namespace ownref::ownership
