#pragma once

#include "ownref/logic/formula.hpp"

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ownref {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {

struct Var { std::string x; };
struct LetVar { std::string x, y; ExprPtr body; };
struct LetInt { std::string x; BigInt n; ExprPtr body; };
struct LetMkref { std::string x, y; ExprPtr body; };
struct LetDeref { std::string x, y; ExprPtr body; };
struct LetCall {
  std::string x, fn;
  int label = 0;
  std::vector<std::string> args;
  ExprPtr body;
};
struct IfZero { std::string x; ExprPtr then_branch, else_branch; };
struct Assign { std::string x, y; ExprPtr next; };
struct Alias { std::string x, y; ExprPtr next; };
struct AliasDeref { std::string x, y; ExprPtr next; };   // alias(x = *y)
struct Assert { logic::Formula cond; ExprPtr next; };
struct Seq { ExprPtr first, second; };

} // namespace ast

struct Expr {
  using Node = std::variant<ast::Var, ast::LetVar, ast::LetInt, ast::LetMkref, ast::LetDeref,
                            ast::LetCall, ast::IfZero, ast::Assign, ast::Alias, ast::AliasDeref,
                            ast::Assert, ast::Seq>;
  Node node;

  template <class T> const T* as() const { return std::get_if<T>(&node); }
};

template <class T> ExprPtr make_expr(T node) {
  return std::make_shared<const Expr>(Expr{std::move(node)});
}

struct FunDef {
  std::vector<std::string> params;
  ExprPtr body;
};

struct Program {
  std::map<std::string, FunDef> defs;
  ExprPtr entry;
};

bool equal(const Expr& a, const Expr& b);
bool equal(const Program& a, const Program& b);

// The let-bound variable of a binding form, or nullptr.
const std::string* binder_of(const Expr& e);
// Continuation of a non-branching form (let body / statement next), or nullptr.
const ExprPtr* continuation_of(const Expr& e);

// Capture-avoiding renaming of free occurrences of x to y.
ExprPtr rename(const ExprPtr& e, const std::string& x, const std::string& y);

// Structural grammar check: lets have atomic right-hand sides and statements carry
// continuations. Returns an empty string if conformant.
std::string grammar_violation(const Program& p);

std::size_t count_alias_annotations(const Program& p);

// -------------------------------------------------------------------------
// Surface syntax

namespace surface {

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Item;
using Seq = std::vector<Item>;

struct Expr {
  enum class Kind { Var, Int, Nondet, Mkref, Deref, Call, Binary, Neg };
  Kind kind = Kind::Var;
  std::string name;           // Var, Call (function), Binary (operator)
  BigInt value;
  std::vector<ExprPtr> args;
  int line = 0, column = 0;
};

struct Item {
  enum class Kind { Let, Assign, Alias, AliasDeref, Assert, If, Block, Expr };
  Kind kind = Kind::Expr;
  std::string x, y;           // let binder / assign target / alias operands
  ExprPtr value;              // let rhs, assign rhs, if condition, plain expression
  logic::Formula cond;        // assert
  Seq body, else_body;        // let body, if branches, block
  bool else_braced = false;   // a braced else branch does not absorb what follows
  int line = 0, column = 0;
};

struct FunDef {
  std::string name;
  std::vector<std::string> params;
  Seq body;
  int line = 0, column = 0;
};

struct Program {
  std::vector<FunDef> defs;
  Seq entry;
};

} // namespace surface
} // namespace ownref
