#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ownref {

using BigInt = mpz_class;

namespace logic {

// The value variable of a refinement.
inline const std::string kNu = "$nu";

struct Term {
  // Deref only appears in surface formulas; desugaring removes it.
  enum class Kind { Var, Const, Add, Sub, Mul, Neg, Deref };

  Kind kind = Kind::Const;
  std::string name;
  BigInt value;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term constant(BigInt v);
  static Term binary(Kind k, Term a, Term b);
  static Term neg(Term a);
  static Term deref(Term a);

  bool operator==(const Term& o) const;
  bool operator<(const Term& o) const;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmp_symbol(CmpOp op);
bool cmp_holds(CmpOp op, const BigInt& a, const BigInt& b);

struct Formula {
  enum class Kind { True, False, Cmp, Not, And, Or, Implies, Iff, Atom };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  std::vector<Term> terms;    // Cmp operands or Atom arguments
  std::vector<Formula> kids;
  std::string pred;           // Atom only

  static Formula truth();
  static Formula falsity();
  static Formula cmp(CmpOp op, Term a, Term b);
  static Formula eq(Term a, Term b) { return cmp(CmpOp::Eq, std::move(a), std::move(b)); }
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula atom(std::string pred, std::vector<Term> args);

  bool is_true() const { return kind == Kind::True; }
  bool operator==(const Formula& o) const;
};

void collect_vars(const Term& t, std::set<std::string>& out);
void collect_vars(const Formula& f, std::set<std::string>& out);
std::set<std::string> free_vars(const Formula& f);

Term substitute(const Term& t, const std::map<std::string, Term>& s);
Formula substitute(const Formula& f, const std::map<std::string, Term>& s);
Formula rename_var(const Formula& f, const std::string& from, const std::string& to);

// Surface syntax, parseable back by the frontend.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);

// Returns false if a variable is unbound or an atom appears.
bool eval_term(const Term& t, const std::function<const BigInt*(const std::string&)>& env, BigInt& out);

} // namespace logic
} // namespace ownref
