#include "ownref/refinement/chc.hpp"

#include <sstream>

namespace ownref::refinement {

using logic::Formula;
using logic::Term;

namespace {

std::string sym(const std::string& s) { return "|" + s + "|"; }

std::string term(const Term& t) {
  switch (t.kind) {
  case Term::Kind::Var: return sym(t.name);
  case Term::Kind::Const:
    return t.value < 0 ? "(- " + BigInt(-t.value).get_str() + ")" : t.value.get_str();
  case Term::Kind::Add: return "(+ " + term(t.args[0]) + " " + term(t.args[1]) + ")";
  case Term::Kind::Sub: return "(- " + term(t.args[0]) + " " + term(t.args[1]) + ")";
  case Term::Kind::Mul: return "(* " + term(t.args[0]) + " " + term(t.args[1]) + ")";
  case Term::Kind::Neg: return "(- " + term(t.args[0]) + ")";
  case Term::Kind::Deref: break;
  }
  return sym("*" + logic::to_string(t.args.at(0)));
}

std::string nary(const char* op, const std::vector<Formula>& kids, const char* unit);

std::string formula(const Formula& f) {
  switch (f.kind) {
  case Formula::Kind::True: return "true";
  case Formula::Kind::False: return "false";
  case Formula::Kind::Cmp: {
    std::string a = term(f.terms[0]), b = term(f.terms[1]);
    switch (f.op) {
    case logic::CmpOp::Eq: return "(= " + a + " " + b + ")";
    case logic::CmpOp::Ne: return "(not (= " + a + " " + b + "))";
    case logic::CmpOp::Lt: return "(< " + a + " " + b + ")";
    case logic::CmpOp::Le: return "(<= " + a + " " + b + ")";
    case logic::CmpOp::Gt: return "(> " + a + " " + b + ")";
    case logic::CmpOp::Ge: return "(>= " + a + " " + b + ")";
    }
    break;
  }
  case Formula::Kind::Not: return "(not " + formula(f.kids[0]) + ")";
  case Formula::Kind::And: return nary("and", f.kids, "true");
  case Formula::Kind::Or: return nary("or", f.kids, "false");
  case Formula::Kind::Implies: return "(=> " + formula(f.kids[0]) + " " + formula(f.kids[1]) + ")";
  case Formula::Kind::Iff: return "(= " + formula(f.kids[0]) + " " + formula(f.kids[1]) + ")";
  case Formula::Kind::Atom: {
    if (f.terms.empty()) return sym(f.pred);
    std::string s = "(" + sym(f.pred);
    for (const auto& t : f.terms) s += " " + term(t);
    return s + ")";
  }
  }
  return "true";
}

std::string nary(const char* op, const std::vector<Formula>& kids, const char* unit) {
  if (kids.empty()) return unit;
  if (kids.size() == 1) return formula(kids[0]);
  std::string s = std::string("(") + op;
  for (const auto& k : kids) s += " " + formula(k);
  return s + ")";
}

} // namespace

std::string emit_smtlib2_horn(const CHCSystem& s) {
  std::ostringstream os;
  os << "(set-logic HORN)\n";
  for (const auto& p : s.predicates) {
    os << "(declare-fun " << sym(p.name) << " (";
    for (int i = 0; i < p.arity; ++i) os << (i ? " " : "") << "Int";
    os << ") Bool)\n";
  }
  for (const auto& c : s.clauses) {
    std::set<std::string> vars;
    for (const auto& b : c.body) logic::collect_vars(b, vars);
    if (c.head) logic::collect_vars(*c.head, vars);
    std::string body = nary("and", c.body, "true");
    std::string head = c.head ? formula(*c.head) : "false";
    std::string impl = "(=> " + body + " " + head + ")";
    if (!c.origin.empty()) os << "; " << c.origin << "\n";
    if (vars.empty()) {
      os << "(assert " << impl << ")\n";
      continue;
    }
    os << "(assert (forall (";
    bool first = true;
    for (const auto& v : vars) {
      os << (first ? "" : " ") << "(" << sym(v) << " Int)";
      first = false;
    }
    os << ") " << impl << "))\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

} // namespace ownref::refinement
