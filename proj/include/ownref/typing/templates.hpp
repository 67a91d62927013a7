#pragma once

#include "ownref/frontend/ast.hpp"
#include "ownref/typing/simple_types.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace ownref::typing {

// Name of the return slot in the end-point environment of a function.
inline const std::string kRet = "$ret";

struct ProgramPoint {
  int id = 0;
  std::string name;                  // p<id>, or f^b / f^e
  std::string function;              // empty for the entry expression
  const Expr* expr = nullptr;        // null for synthetic points
  std::vector<std::string> scope;    // sorted
  std::vector<std::string> fv;       // integer-typed subset of scope, sorted
};

struct PointTable {
  std::vector<ProgramPoint> points;
  std::unordered_map<const Expr*, int> by_expr;
  std::map<std::string, int> begin, end;

  int of(const Expr& e) const { return by_expr.at(&e); }
};

PointTable assign_points(const Program& p, const SimpleTypeMap& types);

struct PredicateSymbol {
  std::string name;
  int arity = 0;
};

// ⟦int ref^d⟧: owners[i] is the ownership of the i-th reference constructor from
// the outside; `leaf` is the predicate refining the integer at depth d.
struct TypeTemplate {
  std::vector<int> owners;
  int leaf = -1;

  int depth() const { return static_cast<int>(owners.size()); }
};

struct TemplateEnv {
  int k = 1;
  SimpleTypeMap types;
  PointTable points;
  std::vector<PredicateSymbol> predicates;
  std::vector<std::string> ownership_vars;
  std::vector<std::map<std::string, TypeTemplate>> gamma;   // indexed by point id
  std::map<std::string, TypeTemplate> returns;              // at f^e

  const TypeTemplate& at(int point, const std::string& x) const;
  // Resolves kRet at an end point to the function's return template.
  const TypeTemplate& lookup(int point, const std::string& x) const;
  const ProgramPoint& point(int id) const { return points.points.at(static_cast<std::size_t>(id)); }
};

TemplateEnv generate_templates(const Program& p, const SimpleTypeMap& types, int k);

struct OwnershipLink {
  enum class Kind { ForcesTop, ZeroImplies };
  Kind kind;
  int owner;           // r
  int inner_owner;     // ZeroImplies: r = 0 ⇒ inner_owner = 0
  int predicate;       // ForcesTop: r = 0 ⇒ predicate ≡ ⊤
};

std::vector<OwnershipLink> wf_link_constraints(const TemplateEnv& env);

std::string dump_templates(const TemplateEnv& env);

} // namespace ownref::typing
