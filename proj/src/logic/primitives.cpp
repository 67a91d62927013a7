#include "ownref/logic/primitives.hpp"

#include "ownref/logic/error.hpp"

namespace ownref::prim {

using logic::CmpOp;
using logic::Formula;
using logic::Term;

namespace {

Primitive arith(std::string name, Term::Kind k) {
  Primitive p;
  p.name = std::move(name);
  p.arity = 2;
  p.eval = [k](const std::vector<BigInt>& a) -> BigInt {
    if (k == Term::Kind::Add) return a[0] + a[1];
    if (k == Term::Kind::Sub) return a[0] - a[1];
    return a[0] * a[1];
  };
  p.schema = [k](const Term& r, const std::vector<Term>& a) {
    // Multiplication stays linear only with a literal operand.
    if (k == Term::Kind::Mul && a[0].kind != Term::Kind::Const &&
        a[1].kind != Term::Kind::Const)
      return Formula::truth();
    return Formula::eq(r, Term::binary(k, a[0], a[1]));
  };
  return p;
}

// 0 encodes true, matching ifz's then-branch.
Primitive comparison(std::string name, CmpOp op) {
  Primitive p;
  p.name = std::move(name);
  p.arity = 2;
  p.eval = [op](const std::vector<BigInt>& a) -> BigInt {
    return logic::cmp_holds(op, a[0], a[1]) ? 0 : 1;
  };
  p.schema = [op](const Term& r, const std::vector<Term>& a) {
    Formula is_zero = Formula::eq(r, Term::constant(0));
    return Formula::conj({Formula::iff(is_zero, Formula::cmp(op, a[0], a[1])),
                          Formula::disj({is_zero, Formula::eq(r, Term::constant(1))})});
  };
  return p;
}

std::map<std::string, Primitive> build() {
  std::map<std::string, Primitive> m;
  auto add = [&](Primitive p) { m.emplace(p.name, std::move(p)); };
  add(arith("+", Term::Kind::Add));
  add(arith("-", Term::Kind::Sub));
  add(arith("*", Term::Kind::Mul));
  add(comparison("=", CmpOp::Eq));
  add(comparison("!=", CmpOp::Ne));
  add(comparison("<", CmpOp::Lt));
  add(comparison("<=", CmpOp::Le));
  add(comparison(">", CmpOp::Gt));
  add(comparison(">=", CmpOp::Ge));
  Primitive nd;
  nd.name = "nondet";
  nd.arity = 0;
  nd.nondet = true;
  nd.schema = [](const Term&, const std::vector<Term>&) { return Formula::truth(); };
  add(std::move(nd));
  return m;
}

} // namespace

const std::map<std::string, Primitive>& registry() {
  static const std::map<std::string, Primitive> r = build();
  return r;
}

const Primitive* lookup(const std::string& name) {
  auto it = registry().find(name);
  return it == registry().end() ? nullptr : &it->second;
}

const Primitive& require(const std::string& name) {
  if (auto* p = lookup(name)) return *p;
  throw UnknownPrimitive("unknown primitive `" + name + "`");
}

} // namespace ownref::prim
