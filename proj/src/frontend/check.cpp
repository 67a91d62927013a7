#include "ownref/frontend/check.hpp"

#include "ownref/frontend/desugar.hpp"
#include "ownref/logic/error.hpp"
#include "ownref/logic/primitives.hpp"

#include <set>

namespace ownref::frontend {

namespace {

using namespace ast;

void reserve_all(NameSupply& ns, const ExprPtr& e) {
  if (!e) return;
  if (auto* b = binder_of(*e)) ns.reserve(*b);
  if (auto* s = e->as<Seq>()) {
    reserve_all(ns, s->first);
    reserve_all(ns, s->second);
  } else if (auto* i = e->as<IfZero>()) {
    reserve_all(ns, i->then_branch);
    reserve_all(ns, i->else_branch);
  } else if (auto* k = continuation_of(*e)) {
    reserve_all(ns, *k);
  }
}

class Checker {
public:
  explicit Checker(const Program& p) : prog_(p) {
    for (const auto& [name, d] : p.defs) {
      for (const auto& x : d.params) names_.reserve(x);
      reserve_all(names_, d.body);
    }
    reserve_all(names_, p.entry);
  }

  Program run() {
    Program out;
    for (const auto& [name, d] : prog_.defs) {
      if (prim::lookup(name))
        throw WellFormednessError("function `" + name + "` shadows a primitive");
      FunDef nd;
      ExprPtr body = d.body;
      std::set<std::string> scope;
      for (const auto& x : d.params) {
        if (scope.count(x))
          throw WellFormednessError("duplicate parameter `" + x + "` in `" + name + "`");
        std::string y = x;
        if (seen_.count(x)) {
          y = names_.fresh(x);
          body = rename(body, x, y);
        }
        seen_.insert(y);
        scope.insert(x);
        nd.params.push_back(y);
      }
      std::set<std::string> inner(nd.params.begin(), nd.params.end());
      nd.body = fix(body, inner);
      out.defs[name] = std::move(nd);
    }
    std::set<std::string> scope;
    out.entry = fix(prog_.entry, scope);
    return out;
  }

private:
  const Program& prog_;
  NameSupply names_;
  std::set<std::string> seen_;
  std::set<int> labels_;

  void use(const std::set<std::string>& scope, const std::string& x) {
    if (!scope.count(x)) throw WellFormednessError("unbound variable `" + x + "`");
  }

  // Renames the binder if already used elsewhere, then checks the body under it.
  std::pair<std::string, ExprPtr> bind(const std::string& x, const ExprPtr& body,
                                       std::set<std::string>& scope) {
    std::string y = x;
    ExprPtr b = body;
    if (seen_.count(x)) {
      y = names_.fresh(x);
      b = rename(body, x, y);
    }
    seen_.insert(y);
    bool shadowed = scope.count(y) > 0;
    scope.insert(y);
    auto fixed = fix(b, scope);
    if (!shadowed) scope.erase(y);
    return {y, fixed};
  }

  ExprPtr fix(const ExprPtr& e, std::set<std::string>& scope) {
    if (!e) throw WellFormednessError("missing subexpression");
    if (auto* n = e->as<Var>()) {
      use(scope, n->x);
      return e;
    }
    if (auto* n = e->as<LetVar>()) {
      use(scope, n->y);
      auto [x, b] = bind(n->x, n->body, scope);
      return make_expr(LetVar{x, n->y, b});
    }
    if (auto* n = e->as<LetInt>()) {
      auto [x, b] = bind(n->x, n->body, scope);
      return make_expr(LetInt{x, n->n, b});
    }
    if (auto* n = e->as<LetMkref>()) {
      use(scope, n->y);
      auto [x, b] = bind(n->x, n->body, scope);
      return make_expr(LetMkref{x, n->y, b});
    }
    if (auto* n = e->as<LetDeref>()) {
      use(scope, n->y);
      auto [x, b] = bind(n->x, n->body, scope);
      return make_expr(LetDeref{x, n->y, b});
    }
    if (auto* n = e->as<LetCall>()) {
      std::size_t arity;
      if (auto it = prog_.defs.find(n->fn); it != prog_.defs.end()) {
        arity = it->second.params.size();
      } else if (auto* p = prim::lookup(n->fn)) {
        arity = static_cast<std::size_t>(p->arity);
      } else {
        throw WellFormednessError("call to undefined function `" + n->fn + "`");
      }
      if (n->args.size() != arity)
        throw WellFormednessError("`" + n->fn + "` expects " + std::to_string(arity) +
                                  " arguments, got " + std::to_string(n->args.size()));
      std::set<std::string> distinct;
      for (const auto& a : n->args) {
        use(scope, a);
        if (!distinct.insert(a).second)
          throw WellFormednessError("call arguments must be distinct variables: `" + a +
                                    "` repeated in call to `" + n->fn + "`");
      }
      if (n->label <= 0 || !labels_.insert(n->label).second)
        throw WellFormednessError("call label " + std::to_string(n->label) +
                                  " is missing or not unique");
      auto [x, b] = bind(n->x, n->body, scope);
      LetCall c = *n;
      c.x = x;
      c.body = b;
      return make_expr(std::move(c));
    }
    if (auto* n = e->as<IfZero>()) {
      use(scope, n->x);
      auto t = fix(n->then_branch, scope);
      auto f = fix(n->else_branch, scope);
      return make_expr(IfZero{n->x, t, f});
    }
    if (auto* n = e->as<Assign>()) {
      use(scope, n->x);
      use(scope, n->y);
      return make_expr(Assign{n->x, n->y, fix(n->next, scope)});
    }
    if (auto* n = e->as<Alias>()) {
      use(scope, n->x);
      use(scope, n->y);
      return make_expr(Alias{n->x, n->y, fix(n->next, scope)});
    }
    if (auto* n = e->as<AliasDeref>()) {
      use(scope, n->x);
      use(scope, n->y);
      return make_expr(AliasDeref{n->x, n->y, fix(n->next, scope)});
    }
    if (auto* n = e->as<Assert>()) {
      for (const auto& v : logic::free_vars(n->cond)) {
        if (v == logic::kNu) throw WellFormednessError("assert mentions the value variable");
        use(scope, v);
      }
      return make_expr(Assert{n->cond, fix(n->next, scope)});
    }
    auto* s = e->as<Seq>();
    auto a = fix(s->first, scope);
    return make_expr(Seq{a, fix(s->second, scope)});
  }
};

} // namespace

Program check_program(const Program& p) {
  if (!p.entry) throw WellFormednessError("program has no entry expression");
  return Checker(p).run();
}

} // namespace ownref::frontend
