#include "ownref/frontend/ast.hpp"

#include "ownref/logic/primitives.hpp"

namespace ownref {

using namespace ast;

namespace {

bool eq_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

template <class... F> struct overload : F... { using F::operator()...; };
template <class... F> overload(F...) -> overload<F...>;

} // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overload{
          [&](const Var& n) { return n.x == b.as<Var>()->x; },
          [&](const LetVar& n) {
            auto& m = *b.as<LetVar>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.body, m.body);
          },
          [&](const LetInt& n) {
            auto& m = *b.as<LetInt>();
            return n.x == m.x && n.n == m.n && eq_ptr(n.body, m.body);
          },
          [&](const LetMkref& n) {
            auto& m = *b.as<LetMkref>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.body, m.body);
          },
          [&](const LetDeref& n) {
            auto& m = *b.as<LetDeref>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.body, m.body);
          },
          [&](const LetCall& n) {
            auto& m = *b.as<LetCall>();
            return n.x == m.x && n.fn == m.fn && n.label == m.label && n.args == m.args &&
                   eq_ptr(n.body, m.body);
          },
          [&](const IfZero& n) {
            auto& m = *b.as<IfZero>();
            return n.x == m.x && eq_ptr(n.then_branch, m.then_branch) &&
                   eq_ptr(n.else_branch, m.else_branch);
          },
          [&](const Assign& n) {
            auto& m = *b.as<Assign>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.next, m.next);
          },
          [&](const Alias& n) {
            auto& m = *b.as<Alias>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.next, m.next);
          },
          [&](const AliasDeref& n) {
            auto& m = *b.as<AliasDeref>();
            return n.x == m.x && n.y == m.y && eq_ptr(n.next, m.next);
          },
          [&](const Assert& n) {
            auto& m = *b.as<Assert>();
            return n.cond == m.cond && eq_ptr(n.next, m.next);
          },
          [&](const Seq& n) {
            auto& m = *b.as<Seq>();
            return eq_ptr(n.first, m.first) && eq_ptr(n.second, m.second);
          },
      },
      a.node);
}

bool equal(const Program& a, const Program& b) {
  if (a.defs.size() != b.defs.size()) return false;
  for (auto ia = a.defs.begin(), ib = b.defs.begin(); ia != a.defs.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.params != ib->second.params ||
        !eq_ptr(ia->second.body, ib->second.body))
      return false;
  }
  return eq_ptr(a.entry, b.entry);
}

const std::string* binder_of(const Expr& e) {
  return std::visit(overload{
                        [](const LetVar& n) -> const std::string* { return &n.x; },
                        [](const LetInt& n) -> const std::string* { return &n.x; },
                        [](const LetMkref& n) -> const std::string* { return &n.x; },
                        [](const LetDeref& n) -> const std::string* { return &n.x; },
                        [](const LetCall& n) -> const std::string* { return &n.x; },
                        [](const auto&) -> const std::string* { return nullptr; },
                    },
                    e.node);
}

const ExprPtr* continuation_of(const Expr& e) {
  return std::visit(overload{
                        [](const LetVar& n) -> const ExprPtr* { return &n.body; },
                        [](const LetInt& n) -> const ExprPtr* { return &n.body; },
                        [](const LetMkref& n) -> const ExprPtr* { return &n.body; },
                        [](const LetDeref& n) -> const ExprPtr* { return &n.body; },
                        [](const LetCall& n) -> const ExprPtr* { return &n.body; },
                        [](const Assign& n) -> const ExprPtr* { return &n.next; },
                        [](const Alias& n) -> const ExprPtr* { return &n.next; },
                        [](const AliasDeref& n) -> const ExprPtr* { return &n.next; },
                        [](const Assert& n) -> const ExprPtr* { return &n.next; },
                        [](const auto&) -> const ExprPtr* { return nullptr; },
                    },
                    e.node);
}

ExprPtr rename(const ExprPtr& e, const std::string& x, const std::string& y) {
  auto sub = [&](const std::string& v) { return v == x ? y : v; };
  // The body of a binder for x is out of scope for the renaming.
  auto body = [&](const std::string& binder, const ExprPtr& b) {
    return binder == x ? b : rename(b, x, y);
  };
  return std::visit(
      overload{
          [&](const Var& n) { return make_expr(Var{sub(n.x)}); },
          [&](const LetVar& n) { return make_expr(LetVar{n.x, sub(n.y), body(n.x, n.body)}); },
          [&](const LetInt& n) { return make_expr(LetInt{n.x, n.n, body(n.x, n.body)}); },
          [&](const LetMkref& n) {
            return make_expr(LetMkref{n.x, sub(n.y), body(n.x, n.body)});
          },
          [&](const LetDeref& n) {
            return make_expr(LetDeref{n.x, sub(n.y), body(n.x, n.body)});
          },
          [&](const LetCall& n) {
            LetCall c = n;
            for (auto& a : c.args) a = sub(a);
            c.body = body(n.x, n.body);
            return make_expr(std::move(c));
          },
          [&](const IfZero& n) {
            return make_expr(
                IfZero{sub(n.x), rename(n.then_branch, x, y), rename(n.else_branch, x, y)});
          },
          [&](const Assign& n) { return make_expr(Assign{sub(n.x), sub(n.y), rename(n.next, x, y)}); },
          [&](const Alias& n) { return make_expr(Alias{sub(n.x), sub(n.y), rename(n.next, x, y)}); },
          [&](const AliasDeref& n) {
            return make_expr(AliasDeref{sub(n.x), sub(n.y), rename(n.next, x, y)});
          },
          [&](const Assert& n) {
            return make_expr(Assert{logic::rename_var(n.cond, x, y), rename(n.next, x, y)});
          },
          [&](const Seq& n) { return make_expr(Seq{rename(n.first, x, y), rename(n.second, x, y)}); },
      },
      e->node);
}

namespace {

std::string violation(const ExprPtr& e) {
  if (!e) return "missing subexpression";
  if (auto* s = e->as<Seq>()) {
    auto a = violation(s->first);
    return a.empty() ? violation(s->second) : a;
  }
  if (auto* i = e->as<IfZero>()) {
    auto a = violation(i->then_branch);
    return a.empty() ? violation(i->else_branch) : a;
  }
  if (auto* c = e->as<LetCall>()) {
    if (c->label <= 0) return "call to " + c->fn + " has no label";
  }
  if (auto* k = continuation_of(*e)) return violation(*k);
  return {};
}

void count_alias(const ExprPtr& e, std::size_t& n) {
  if (!e) return;
  if (e->as<Alias>() || e->as<AliasDeref>()) ++n;
  if (auto* s = e->as<Seq>()) {
    count_alias(s->first, n);
    count_alias(s->second, n);
  } else if (auto* i = e->as<IfZero>()) {
    count_alias(i->then_branch, n);
    count_alias(i->else_branch, n);
  } else if (auto* k = continuation_of(*e)) {
    count_alias(*k, n);
  }
}

} // namespace

std::string grammar_violation(const Program& p) {
  for (const auto& [name, def] : p.defs) {
    auto v = violation(def.body);
    if (!v.empty()) return name + ": " + v;
  }
  return violation(p.entry);
}

std::size_t count_alias_annotations(const Program& p) {
  std::size_t n = 0;
  for (const auto& [name, def] : p.defs) count_alias(def.body, n);
  count_alias(p.entry, n);
  return n;
}

} // namespace ownref
