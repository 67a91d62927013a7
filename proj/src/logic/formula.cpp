#include "ownref/logic/formula.hpp"

#include <sstream>

namespace ownref::logic {

Term Term::var(std::string name) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

Term Term::constant(BigInt v) {
  Term t;
  t.kind = Kind::Const;
  t.value = std::move(v);
  return t;
}

Term Term::binary(Kind k, Term a, Term b) {
  Term t;
  t.kind = k;
  t.args = {std::move(a), std::move(b)};
  return t;
}

Term Term::neg(Term a) {
  Term t;
  t.kind = Kind::Neg;
  t.args = {std::move(a)};
  return t;
}

Term Term::deref(Term a) {
  Term t;
  t.kind = Kind::Deref;
  t.args = {std::move(a)};
  return t;
}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && name == o.name && value == o.value && args == o.args;
}

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  if (value != o.value) return value < o.value;
  return args < o.args;
}

const char* cmp_symbol(CmpOp op) {
  switch (op) {
  case CmpOp::Eq: return "=";
  case CmpOp::Ne: return "!=";
  case CmpOp::Lt: return "<";
  case CmpOp::Le: return "<=";
  case CmpOp::Gt: return ">";
  case CmpOp::Ge: return ">=";
  }
  return "?";
}

bool cmp_holds(CmpOp op, const BigInt& a, const BigInt& b) {
  switch (op) {
  case CmpOp::Eq: return a == b;
  case CmpOp::Ne: return a != b;
  case CmpOp::Lt: return a < b;
  case CmpOp::Le: return a <= b;
  case CmpOp::Gt: return a > b;
  case CmpOp::Ge: return a >= b;
  }
  return false;
}

Formula Formula::truth() { return Formula{}; }

Formula Formula::falsity() {
  Formula f;
  f.kind = Kind::False;
  return f;
}

Formula Formula::cmp(CmpOp op, Term a, Term b) {
  Formula f;
  f.kind = Kind::Cmp;
  f.op = op;
  f.terms = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::negate(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.kids = {std::move(g)};
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  std::vector<Formula> kept;
  for (auto& f : fs) {
    if (f.kind == Kind::True) continue;
    if (f.kind == Kind::And) {
      for (auto& k : f.kids) kept.push_back(std::move(k));
      continue;
    }
    kept.push_back(std::move(f));
  }
  if (kept.empty()) return truth();
  if (kept.size() == 1) return std::move(kept[0]);
  Formula f;
  f.kind = Kind::And;
  f.kids = std::move(kept);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return falsity();
  if (fs.size() == 1) return std::move(fs[0]);
  Formula f;
  f.kind = Kind::Or;
  f.kids = std::move(fs);
  return f;
}

Formula Formula::implies(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Implies;
  f.kids = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::iff(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Iff;
  f.kids = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Atom;
  f.pred = std::move(pred);
  f.terms = std::move(args);
  return f;
}

bool Formula::operator==(const Formula& o) const {
  return kind == o.kind && (kind != Kind::Cmp || op == o.op) && terms == o.terms &&
         kids == o.kids && pred == o.pred;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms) collect_vars(t, out);
  for (const auto& k : f.kids) collect_vars(k, out);
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& s) {
  if (t.kind == Term::Kind::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term r = t;
  for (auto& a : r.args) a = substitute(a, s);
  return r;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& s) {
  Formula r = f;
  for (auto& t : r.terms) t = substitute(t, s);
  for (auto& k : r.kids) k = substitute(k, s);
  return r;
}

Formula rename_var(const Formula& f, const std::string& from, const std::string& to) {
  return substitute(f, {{from, Term::var(to)}});
}

namespace {

int term_prec(const Term& t) {
  switch (t.kind) {
  case Term::Kind::Add:
  case Term::Kind::Sub: return 1;
  case Term::Kind::Mul: return 2;
  default: return 3;
  }
}

void print_term(std::ostream& os, const Term& t, int min_prec) {
  bool paren = term_prec(t) < min_prec;
  if (paren) os << '(';
  switch (t.kind) {
  case Term::Kind::Var: os << t.name; break;
  case Term::Kind::Const: os << t.value.get_str(); break;
  case Term::Kind::Add:
    print_term(os, t.args[0], 1);
    os << " + ";
    print_term(os, t.args[1], 2);
    break;
  case Term::Kind::Sub:
    print_term(os, t.args[0], 1);
    os << " - ";
    print_term(os, t.args[1], 2);
    break;
  case Term::Kind::Mul:
    print_term(os, t.args[0], 2);
    os << " * ";
    print_term(os, t.args[1], 3);
    break;
  case Term::Kind::Neg:
    os << '-';
    print_term(os, t.args[0], 3);
    break;
  case Term::Kind::Deref:
    os << '*';
    print_term(os, t.args[0], 3);
    break;
  }
  if (paren) os << ')';
}

// 0: or, 1: and, 2: unary/atomic
void print_formula(std::ostream& os, const Formula& f, int min_prec) {
  auto wrap = [&](int prec, auto body) {
    bool paren = prec < min_prec;
    if (paren) os << '(';
    body();
    if (paren) os << ')';
  };
  switch (f.kind) {
  case Formula::Kind::True: os << "true"; break;
  case Formula::Kind::False: os << "false"; break;
  case Formula::Kind::Cmp:
    print_term(os, f.terms[0], 1);
    os << ' ' << cmp_symbol(f.op) << ' ';
    print_term(os, f.terms[1], 1);
    break;
  case Formula::Kind::Not:
    os << '!';
    print_formula(os, f.kids[0], 2);
    break;
  case Formula::Kind::And:
    wrap(1, [&] {
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << " && ";
        print_formula(os, f.kids[i], 2);
      }
    });
    break;
  case Formula::Kind::Or:
    wrap(0, [&] {
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << " || ";
        print_formula(os, f.kids[i], 1);
      }
    });
    break;
  case Formula::Kind::Implies:
    print_formula(os, Formula::disj({Formula::negate(f.kids[0]), f.kids[1]}), min_prec);
    break;
  case Formula::Kind::Iff:
    print_formula(os,
                  Formula::disj({Formula::conj({f.kids[0], f.kids[1]}),
                                 Formula::conj({Formula::negate(f.kids[0]),
                                                Formula::negate(f.kids[1])})}),
                  min_prec);
    break;
  case Formula::Kind::Atom:
    os << f.pred << '(';
    for (size_t i = 0; i < f.terms.size(); ++i) {
      if (i) os << ", ";
      print_term(os, f.terms[i], 1);
    }
    os << ')';
    break;
  }
}

} // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t, 1);
  return os.str();
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f, 0);
  return os.str();
}

bool eval_term(const Term& t, const std::function<const BigInt*(const std::string&)>& env,
               BigInt& out) {
  switch (t.kind) {
  case Term::Kind::Var: {
    const BigInt* v = env(t.name);
    if (!v) return false;
    out = *v;
    return true;
  }
  case Term::Kind::Const: out = t.value; return true;
  case Term::Kind::Neg:
    if (!eval_term(t.args[0], env, out)) return false;
    out = -out;
    return true;
  case Term::Kind::Add:
  case Term::Kind::Sub:
  case Term::Kind::Mul: {
    BigInt a, b;
    if (!eval_term(t.args[0], env, a) || !eval_term(t.args[1], env, b)) return false;
    out = t.kind == Term::Kind::Add ? BigInt(a + b)
          : t.kind == Term::Kind::Sub ? BigInt(a - b) : BigInt(a * b);
    return true;
  }
  case Term::Kind::Deref: return false;
  }
  return false;
}

} // namespace ownref::logic
