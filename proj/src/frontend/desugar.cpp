#include "ownref/frontend/desugar.hpp"

#include "ownref/frontend/check.hpp"
#include "ownref/frontend/parser.hpp"
#include "ownref/logic/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace ownref::frontend {

void NameSupply::reserve(const std::string& name) {
  auto pos = name.rfind('$');
  if (pos == std::string::npos || pos + 1 == name.size()) return;
  unsigned long n = 0;
  for (std::size_t i = pos + 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return;
    n = n * 10 + static_cast<unsigned long>(name[i] - '0');
  }
  next_ = std::max(next_, n + 1);
}

std::string NameSupply::fresh(const std::string& hint) {
  auto base = hint.substr(0, hint.find('$'));
  if (base.empty()) base = "t";
  return base + "$" + std::to_string(next_++);
}

namespace {

using namespace ast;
using SExpr = surface::Expr;
using SExprPtr = surface::ExprPtr;
using surface::Item;
using K = std::function<ExprPtr(const std::string&)>;
using Body = std::function<ExprPtr()>;

void reserve_formula(NameSupply& ns, const logic::Formula& f) {
  for (const auto& v : logic::free_vars(f)) ns.reserve(v);
}

void reserve_expr(NameSupply& ns, const SExprPtr& e) {
  if (!e) return;
  if (e->kind == SExpr::Kind::Var) ns.reserve(e->name);
  for (const auto& a : e->args) reserve_expr(ns, a);
}

void reserve_seq(NameSupply& ns, const surface::Seq& s) {
  for (const auto& it : s) {
    ns.reserve(it.x);
    ns.reserve(it.y);
    reserve_expr(ns, it.value);
    reserve_formula(ns, it.cond);
    reserve_seq(ns, it.body);
    reserve_seq(ns, it.else_body);
  }
}

class Desugarer {
public:
  explicit Desugarer(NameSupply& ns) : names_(ns) {}

  ExprPtr seq(const surface::Seq& items, std::size_t i = 0) {
    const Item& it = items[i];
    bool last = i + 1 == items.size();
    auto rest = [&]() -> ExprPtr {
      if (last) {
        auto d = names_.fresh("d");
        return make_expr(LetInt{d, 0, make_expr(Var{d})});
      }
      return seq(items, i + 1);
    };
    auto then_rest = [&](ExprPtr e) -> ExprPtr {
      if (last) return e;
      auto first = std::move(e);
      return make_expr(Seq{first, seq(items, i + 1)});
    };

    switch (it.kind) {
    case Item::Kind::Let:
      return let_rhs(it.x, it.value, [&] { return seq(it.body); });
    case Item::Kind::Assign:
      return atom(it.value, [&](const std::string& v) {
        return make_expr(Assign{it.x, v, rest()});
      });
    case Item::Kind::Alias: return make_expr(Alias{it.x, it.y, rest()});
    case Item::Kind::AliasDeref: return make_expr(AliasDeref{it.x, it.y, rest()});
    case Item::Kind::Assert: {
      return assert_derefs(it, it.cond, [&](logic::Formula f) {
        return make_expr(Assert{std::move(f), rest()});
      });
    }
    case Item::Kind::If:
      return then_rest(atom(it.value, [&](const std::string& v) {
        auto t = seq(it.body);
        auto e = seq(it.else_body);
        return make_expr(IfZero{v, t, e});
      }));
    case Item::Kind::Block: return then_rest(seq(it.body));
    case Item::Kind::Expr:
      return then_rest(atom(it.value, [](const std::string& v) { return make_expr(Var{v}); }));
    }
    return nullptr;
  }

private:
  NameSupply& names_;
  int next_label_ = 1;

  int take_label() { return next_label_++; }

  ExprPtr atom(const SExprPtr& e, const K& k) {
    if (e->kind == SExpr::Kind::Var) return k(e->name);
    auto t = names_.fresh("t");
    return let_rhs(t, e, [&] { return k(t); });
  }

  ExprPtr atoms(const std::vector<SExprPtr>& es, std::size_t i, std::vector<std::string>& acc,
                const std::function<ExprPtr()>& k) {
    if (i == es.size()) return k();
    return atom(es[i], [&](const std::string& v) {
      acc.push_back(v);
      return atoms(es, i + 1, acc, k);
    });
  }

  ExprPtr call(const std::string& x, const std::string& fn, const std::vector<SExprPtr>& args,
               const Body& body) {
    std::vector<std::string> vs;
    return atoms(args, 0, vs, [&]() -> ExprPtr {
      // Repeated arguments are passed through fresh aliases.
      std::vector<std::pair<std::string, std::string>> copies;
      std::vector<std::string> distinct;
      for (const auto& v : vs) {
        if (std::find(distinct.begin(), distinct.end(), v) != distinct.end()) {
          auto c = names_.fresh(v);
          copies.emplace_back(c, v);
          distinct.push_back(c);
        } else {
          distinct.push_back(v);
        }
      }
      int label = take_label();
      ExprPtr e = make_expr(LetCall{x, fn, label, distinct, body()});
      for (auto it = copies.rbegin(); it != copies.rend(); ++it)
        e = make_expr(LetVar{it->first, it->second, e});
      return e;
    });
  }

  ExprPtr let_rhs(const std::string& x, const SExprPtr& e, const Body& body) {
    switch (e->kind) {
    case SExpr::Kind::Var: return make_expr(LetVar{x, e->name, body()});
    case SExpr::Kind::Int: return make_expr(LetInt{x, e->value, body()});
    case SExpr::Kind::Nondet: return call(x, "nondet", {}, body);
    case SExpr::Kind::Mkref:
      return atom(e->args[0], [&](const std::string& v) {
        return make_expr(LetMkref{x, v, body()});
      });
    case SExpr::Kind::Deref:
      return atom(e->args[0], [&](const std::string& v) {
        return make_expr(LetDeref{x, v, body()});
      });
    case SExpr::Kind::Call: return call(x, e->name, e->args, body);
    case SExpr::Kind::Binary: return call(x, e->name, e->args, body);
    case SExpr::Kind::Neg: {
      auto zero = std::make_shared<SExpr>();
      zero->kind = SExpr::Kind::Int;
      zero->value = 0;
      return call(x, "-", {zero, e->args[0]}, body);
    }
    }
    return nullptr;
  }

  // Binds every `*t` in the formula to a fresh variable, innermost first.
  ExprPtr assert_derefs(const Item& it, const logic::Formula& f,
                        const std::function<ExprPtr(logic::Formula)>& k) {
    const logic::Term* found = nullptr;
    find_deref(f, found);
    if (!found) return k(f);
    if (found->args[0].kind != logic::Term::Kind::Var)
      throw ParseError(it.line, it.column, "only variables may be dereferenced in a formula");
    auto y = found->args[0].name;
    auto t = names_.fresh("tmp");
    logic::Term target = *found;
    auto replaced = replace(f, target, logic::Term::var(t));
    return make_expr(LetDeref{t, y, assert_derefs(it, replaced, k)});
  }

  static void find_deref(const logic::Term& t, const logic::Term*& found) {
    if (found) return;
    for (const auto& a : t.args) find_deref(a, found);
    if (!found && t.kind == logic::Term::Kind::Deref) found = &t;
  }

  static void find_deref(const logic::Formula& f, const logic::Term*& found) {
    for (const auto& t : f.terms) find_deref(t, found);
    for (const auto& c : f.kids) find_deref(c, found);
  }

  static logic::Term replace(const logic::Term& t, const logic::Term& from, const logic::Term& to) {
    if (t == from) return to;
    logic::Term r = t;
    for (auto& a : r.args) a = replace(a, from, to);
    return r;
  }

  static logic::Formula replace(const logic::Formula& f, const logic::Term& from,
                                const logic::Term& to) {
    logic::Formula r = f;
    for (auto& t : r.terms) t = replace(t, from, to);
    for (auto& c : r.kids) c = replace(c, from, to);
    return r;
  }
};

} // namespace

Program desugar(const surface::Program& sp) {
  NameSupply names;
  for (const auto& d : sp.defs) {
    for (const auto& p : d.params) names.reserve(p);
    reserve_seq(names, d.body);
  }
  reserve_seq(names, sp.entry);

  std::map<std::string, const surface::FunDef*> sorted;
  for (const auto& d : sp.defs) sorted[d.name] = &d;

  Desugarer ds(names);
  Program p;
  for (const auto& [name, d] : sorted) p.defs[name] = FunDef{d->params, ds.seq(d->body)};
  p.entry = ds.seq(sp.entry);
  return p;
}

Program load_program(std::string_view source) { return check_program(desugar(parse(source))); }

} // namespace ownref::frontend
