#include "ownref/semantics/interpreter.hpp"

#include "ownref/frontend/pretty.hpp"
#include "ownref/logic/primitives.hpp"

#include <iostream>

namespace ownref::semantics {

using namespace ast;

bool Value::operator==(const Value& o) const { return v == o.v; }

std::string Value::to_string() const {
  if (is_int()) return as_int().get_str();
  return "a" + std::to_string(as_addr().id);
}

Address Heap::alloc(Value v) {
  cells.push_back(std::move(v));
  return Address{cells.size() - 1};
}

const Value* Heap::find(Address a) const { return a.id < cells.size() ? &cells[a.id] : nullptr; }
Value* Heap::find(Address a) { return a.id < cells.size() ? &cells[a.id] : nullptr; }

std::optional<std::size_t> lookup(const Env& env, const std::string& x) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->source == x) return n->reg;
  return std::nullopt;
}

Env extend(Env env, std::string source, std::size_t reg) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(source), reg, std::move(env)});
}

const char* outcome_name(Outcome::Kind k) {
  switch (k) {
  case Outcome::Kind::Final: return "Final";
  case Outcome::Kind::AssertFail: return "AssertFail";
  case Outcome::Kind::AliasFail: return "AliasFail";
  case Outcome::Kind::OutOfFuel: return "OutOfFuel";
  case Outcome::Kind::Stuck: return "Stuck";
  }
  return "?";
}

std::string Outcome::to_string() const {
  std::string s = outcome_name(kind);
  if (value) s += "(" + value->to_string() + ")";
  if (!reason.empty()) s += ": " + reason;
  return s;
}

std::pair<std::vector<const Expr*>, const Expr*> decompose(const Expr& e) {
  std::vector<const Expr*> ctx;
  const Expr* cur = &e;
  while (auto* s = cur->as<Seq>()) {
    ctx.push_back(s->second.get());
    cur = s->first.get();
  }
  return {ctx, cur};
}

namespace {

void reserve_names(frontend::NameSupply& ns, const ExprPtr& e) {
  if (!e) return;
  if (auto* b = binder_of(*e)) ns.reserve(*b);
  if (auto* s = e->as<Seq>()) {
    reserve_names(ns, s->first);
    reserve_names(ns, s->second);
  } else if (auto* i = e->as<IfZero>()) {
    reserve_names(ns, i->then_branch);
    reserve_names(ns, i->else_branch);
  } else if (auto* k = continuation_of(*e)) {
    reserve_names(ns, *k);
  }
}

} // namespace

Machine::Machine(const Program& p, const RunOptions& opts)
    : prog_(p), opts_(opts), rng_(opts.seed) {
  for (const auto& [name, d] : p.defs) {
    for (const auto& x : d.params) names_.reserve(x);
    reserve_names(names_, d.body);
  }
  reserve_names(names_, p.entry);
  cfg_.expr = p.entry.get();
}

std::size_t Machine::fresh_register(const std::string& source, Value v) {
  cfg_.regs.push_back(Register{names_.fresh(source), std::move(v)});
  return cfg_.regs.size() - 1;
}

std::optional<Value> Machine::value_of(const std::string& x) const {
  auto r = lookup(cfg_.env, x);
  if (!r) return std::nullopt;
  return cfg_.regs[*r].value;
}

std::map<std::string, Value> Machine::visible_registers() const {
  std::map<std::string, Value> out;
  for (const EnvNode* n = cfg_.env.get(); n; n = n->next.get())
    out.emplace(n->source, cfg_.regs[n->reg].value);
  return out;
}

Outcome Machine::stuck(std::string why) {
  Outcome o;
  o.kind = Outcome::Kind::Stuck;
  o.reason = std::move(why);
  o.steps = steps_;
  return o;
}

void Machine::trace(const char* rule) {
  last_rule_ = rule;
  if (!opts_.trace) return;
  auto name = [&](const std::string& x) {
    if (auto r = lookup(cfg_.env, x)) return cfg_.regs[*r].name;
    return x;
  };
  std::string text;
  if (cfg_.returned) {
    auto* c = cfg_.expr->as<LetCall>();
    text = "let " + c->x + " = " + cfg_.regs[*cfg_.returned].name + " in ...";
  } else {
    // Binders are printed unrenamed; the rule refreshes them.
    const std::string* b = binder_of(*cfg_.expr);
    text = frontend::redex_head(*cfg_.expr, [&](const std::string& x) {
      return b && x == *b ? x : name(x);
    });
  }
  *opts_.trace << rule << " " << text << "\n";
}

std::optional<Outcome> Machine::step() {
  // Decomposition E[redex] is not itself a transition.
  while (!cfg_.returned) {
    auto* s = cfg_.expr->as<Seq>();
    if (!s) break;
    cfg_.context.push_back(SeqFrame{s->second.get(), cfg_.env});
    cfg_.expr = s->first.get();
  }

  const Expr& e = *cfg_.expr;
  auto reg = [&](const std::string& x) -> std::optional<std::size_t> { return lookup(cfg_.env, x); };
  auto finish = [&](Outcome::Kind k) {
    Outcome o;
    o.kind = k;
    o.steps = steps_;
    return o;
  };

  if (cfg_.returned) {
    trace("R-Let");
    auto* c = e.as<LetCall>();
    auto r = fresh_register(c->x, cfg_.regs[*cfg_.returned].value);
    cfg_.env = extend(cfg_.env, c->x, r);
    cfg_.expr = c->body.get();
    cfg_.returned.reset();
    ++steps_;
    return std::nullopt;
  }

  if (auto* n = e.as<Var>()) {
    auto r = reg(n->x);
    if (!r) return stuck("unbound variable " + n->x);
    if (!cfg_.context.empty()) {
      trace("R-Seq");
      cfg_.expr = cfg_.context.back().next;
      cfg_.env = cfg_.context.back().env;
      cfg_.context.pop_back();
    } else if (!cfg_.stack.empty()) {
      trace("R-Var");
      ReturnContext f = std::move(cfg_.stack.back());
      cfg_.stack.pop_back();
      cfg_.context = std::move(f.context);
      cfg_.expr = f.call;
      cfg_.env = std::move(f.env);
      cfg_.returned = *r;
    } else {
      Outcome o = finish(Outcome::Kind::Final);
      o.value = cfg_.regs[*r].value;
      return o;
    }
    ++steps_;
    return std::nullopt;
  }

  auto bind = [&](const std::string& x, Value v, const ExprPtr& body) {
    auto r = fresh_register(x, std::move(v));
    cfg_.env = extend(cfg_.env, x, r);
    cfg_.expr = body.get();
  };

  if (auto* n = e.as<LetVar>()) {
    auto r = reg(n->y);
    if (!r) return stuck("unbound variable " + n->y);
    trace("R-Let");
    bind(n->x, cfg_.regs[*r].value, n->body);
  } else if (auto* n = e.as<LetInt>()) {
    trace("R-LetInt");
    bind(n->x, Value::integer(n->n), n->body);
  } else if (auto* n = e.as<LetMkref>()) {
    auto r = reg(n->y);
    if (!r) return stuck("unbound variable " + n->y);
    trace("R-MkRef");
    Address a = cfg_.heap.alloc(cfg_.regs[*r].value);
    bind(n->x, Value::address(a), n->body);
  } else if (auto* n = e.as<LetDeref>()) {
    auto r = reg(n->y);
    if (!r) return stuck("unbound variable " + n->y);
    const Value& v = cfg_.regs[*r].value;
    if (v.is_int()) return stuck("dereference of integer " + n->y);
    const Value* cell = cfg_.heap.find(v.as_addr());
    if (!cell) return stuck("dangling address " + v.to_string());
    trace("R-Deref");
    bind(n->x, *cell, n->body);
  } else if (auto* n = e.as<LetCall>()) {
    std::vector<std::size_t> args;
    for (const auto& a : n->args) {
      auto r = reg(a);
      if (!r) return stuck("unbound variable " + a);
      args.push_back(*r);
    }
    if (auto it = prog_.defs.find(n->fn); it != prog_.defs.end()) {
      trace("R-Call");
      const FunDef& f = it->second;
      Env callee;
      for (std::size_t i = 0; i < args.size(); ++i) callee = extend(callee, f.params[i], args[i]);
      cfg_.stack.push_back(ReturnContext{std::move(cfg_.context), &e, cfg_.env});
      cfg_.context.clear();
      cfg_.env = std::move(callee);
      cfg_.expr = f.body.get();
    } else {
      const prim::Primitive* p = prim::lookup(n->fn);
      if (!p) return stuck("unknown function " + n->fn);
      BigInt result;
      if (p->nondet) {
        std::uniform_int_distribution<long long> dist(opts_.nondet_min, opts_.nondet_max);
        result = BigInt(std::to_string(dist(rng_)));
      } else {
        std::vector<BigInt> vals;
        for (auto r : args) {
          if (!cfg_.regs[r].value.is_int())
            return stuck("primitive " + n->fn + " applied to an address");
          vals.push_back(cfg_.regs[r].value.as_int());
        }
        result = p->eval(vals);
      }
      trace("R-Prim");
      bind(n->x, Value::integer(result), n->body);
    }
  } else if (auto* n = e.as<IfZero>()) {
    auto r = reg(n->x);
    if (!r) return stuck("unbound variable " + n->x);
    const Value& v = cfg_.regs[*r].value;
    if (!v.is_int()) return stuck("ifz on an address");
    bool zero = v.as_int() == 0;
    trace(zero ? "R-IfTrue" : "R-IfFalse");
    cfg_.expr = zero ? n->then_branch.get() : n->else_branch.get();
  } else if (auto* n = e.as<Assign>()) {
    auto rx = reg(n->x), ry = reg(n->y);
    if (!rx || !ry) return stuck("unbound variable in assignment");
    const Value& target = cfg_.regs[*rx].value;
    if (target.is_int()) return stuck("assignment through integer " + n->x);
    Value* cell = cfg_.heap.find(target.as_addr());
    if (!cell) return stuck("dangling address " + target.to_string());
    trace("R-Assign");
    *cell = cfg_.regs[*ry].value;
    cfg_.expr = n->next.get();
  } else if (auto* n = e.as<Alias>()) {
    auto rx = reg(n->x), ry = reg(n->y);
    if (!rx || !ry) return stuck("unbound variable in alias");
    if (cfg_.regs[*rx].value == cfg_.regs[*ry].value) {
      trace("R-Alias");
      cfg_.expr = n->next.get();
    } else {
      trace("R-AliasFail");
      ++steps_;
      return finish(Outcome::Kind::AliasFail);
    }
  } else if (auto* n = e.as<AliasDeref>()) {
    auto rx = reg(n->x), ry = reg(n->y);
    if (!rx || !ry) return stuck("unbound variable in alias");
    const Value& p = cfg_.regs[*ry].value;
    if (p.is_int()) return stuck("alias through integer " + n->y);
    const Value* cell = cfg_.heap.find(p.as_addr());
    if (!cell) return stuck("dangling address " + p.to_string());
    if (*cell == cfg_.regs[*rx].value) {
      trace("R-AliasPtr");
      cfg_.expr = n->next.get();
    } else {
      trace("R-AliasPtrFail");
      ++steps_;
      return finish(Outcome::Kind::AliasFail);
    }
  } else if (auto* n = e.as<Assert>()) {
    std::string warning;
    bool ok = eval_formula(visible_registers(), n->cond, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    if (ok) {
      trace("R-Assert");
      cfg_.expr = n->next.get();
    } else {
      trace("R-AssertFail");
      ++steps_;
      return finish(Outcome::Kind::AssertFail);
    }
  }
  ++steps_;
  return std::nullopt;
}

Outcome Machine::run() {
  while (steps_ < opts_.fuel) {
    if (auto o = step()) return *o;
  }
  Outcome o;
  o.kind = Outcome::Kind::OutOfFuel;
  o.steps = steps_;
  return o;
}

Outcome run(const Program& p, const RunOptions& opts) { return Machine(p, opts).run(); }

} // namespace ownref::semantics
