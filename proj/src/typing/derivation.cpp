#include "ownref/typing/derivation.hpp"

#include "ownref/logic/primitives.hpp"

#include <set>

namespace ownref::typing {

using logic::Formula;
using logic::Term;

std::vector<Term> context_params(int k) {
  std::vector<Term> out;
  for (int i = 1; i <= k; ++i) out.push_back(Term::var("$c" + std::to_string(i)));
  return out;
}

Binding local_binding(const TemplateEnv& env, int point) {
  Binding b;
  b.context = context_params(env.k);
  for (const auto& v : env.point(point).fv) b.fv.push_back(Term::var(v));
  return b;
}

const TypeTemplate& resolve(const TemplateEnv& env, const TemplateRef& r) {
  return env.lookup(r.point, r.var);
}

Formula leaf_atom(const TemplateEnv& env, const TypeTemplate& t, const Binding& b,
                  const Term& value) {
  std::vector<Term> args{value};
  args.insert(args.end(), b.context.begin(), b.context.end());
  args.insert(args.end(), b.fv.begin(), b.fv.end());
  return Formula::atom(env.predicates[static_cast<std::size_t>(t.leaf)].name, std::move(args));
}

namespace {

using namespace ast;

struct Cont {
  enum class Kind { End, Join, Return } kind = Kind::End;
  int point = 0;
  std::string fn;
};

class Deriver {
public:
  Deriver(const Program& p, const TemplateEnv& env) : prog_(p), env_(env) {}

  Derivation run() {
    for (const auto& [name, d] : prog_.defs) {
      int b = env_.points.begin.at(name);
      int p0 = env_.points.of(*d.body);
      frame(Guard{b, {}}, b, p0, {});
      walk(*d.body, Cont{Cont::Kind::Return, 0, name});
    }
    walk(*prog_.entry, Cont{});
    return std::move(out_);
  }

private:
  const Program& prog_;
  const TemplateEnv& env_;
  Derivation out_;
  std::map<std::string, BigInt> constants_;

  int depth(const std::string& x) const { return env_.types.of(x).depth; }

  Slice slice(int point, const std::string& x, int from, int to, Binding b,
              std::optional<Term> value = std::nullopt) {
    return Slice{TemplateRef{point, x}, from, to, std::move(b), std::move(value)};
  }

  // All levels of x at point, with ν = x for integers.
  Slice whole(int point, const std::string& x) {
    int d = depth(x);
    std::optional<Term> v;
    if (d == 0) v = Term::var(x);
    return slice(point, x, 0, d, local_binding(env_, point), v);
  }

  int owner(int point, const std::string& x, int level) const {
    return env_.at(point, x).owners.at(static_cast<std::size_t>(level));
  }

  void emit(Obligation o) { out_.obligations.push_back(std::move(o)); }

  void flow(const Guard& g, std::optional<Slice> src, Slice dst,
            std::optional<Strengthening> st = std::nullopt) {
    emit(ob::Flow{g, std::move(src), std::move(dst), std::move(st)});
  }

  // Every variable in scope at q flows from p, except those handled by the caller.
  void frame(const Guard& g, int p, int q, const std::set<std::string>& skip) {
    for (const auto& v : env_.point(q).scope)
      if (!skip.count(v)) flow(g, whole(p, v), whole(q, v));
  }

  void walk(const Expr& e, const Cont& cont) {
    int p = env_.points.of(e);
    auto body_point = [&](const ExprPtr& b) { return env_.points.of(*b); };

    if (auto* n = e.as<Var>()) {
      tail(p, n->x, cont);
      return;
    }
    if (auto* n = e.as<LetVar>()) {
      int q = body_point(n->body);
      Guard g{p, {}};
      if (depth(n->y) == 0) {
        g.facts.push_back(Formula::eq(Term::var(n->x), Term::var(n->y)));
        frame(g, p, q, {n->x});
        flow(g, std::nullopt, whole(q, n->x));
      } else {
        emit(ob::Split{g, whole(p, n->y), whole(q, n->y), whole(q, n->x), std::nullopt});
        frame(g, p, q, {n->x, n->y});
      }
      walk(*n->body, cont);
      return;
    }
    if (auto* n = e.as<LetInt>()) {
      int q = body_point(n->body);
      constants_[n->x] = n->n;
      Guard g{p, {Formula::eq(Term::var(n->x), Term::constant(n->n))}};
      frame(g, p, q, {n->x});
      flow(g, std::nullopt, whole(q, n->x));
      walk(*n->body, cont);
      return;
    }
    if (auto* n = e.as<LetMkref>()) {
      int q = body_point(n->body);
      Guard g{p, {}};
      emit(ob::Split{g, whole(p, n->y), whole(q, n->y),
                     slice(q, n->x, 1, depth(n->x), local_binding(env_, q)), std::nullopt});
      emit(ob::OwnOne{owner(q, n->x, 0)});
      frame(g, p, q, {n->x, n->y});
      walk(*n->body, cont);
      return;
    }
    if (auto* n = e.as<LetDeref>()) {
      int q = body_point(n->body);
      int d = depth(n->y);
      Guard g{p, {}};
      std::optional<Term> xv;
      std::optional<Strengthening> st;
      if (d == 1) {
        xv = Term::var(n->x);
        g.facts.push_back(leaf_atom(env_, env_.at(p, n->y), local_binding(env_, p), *xv));
        st = Strengthening{owner(q, n->y, 0), Formula::eq(Term::var(logic::kNu), *xv)};
      }
      flow(g, slice(p, n->y, 0, 0, local_binding(env_, p)),
           slice(q, n->y, 0, 0, local_binding(env_, q)));
      emit(ob::Split{g, slice(p, n->y, 1, d, local_binding(env_, p)),
                     slice(q, n->y, 1, d, local_binding(env_, q)),
                     slice(q, n->x, 0, d - 1, local_binding(env_, q), xv), st});
      frame(g, p, q, {n->x, n->y});
      walk(*n->body, cont);
      return;
    }
    if (auto* n = e.as<LetCall>()) {
      if (prog_.defs.count(n->fn))
        call(p, *n);
      else
        primitive(p, *n);
      walk(*n->body, cont);
      return;
    }
    if (auto* n = e.as<IfZero>()) {
      int p1 = body_point(n->then_branch), p2 = body_point(n->else_branch);
      Term x = Term::var(n->x);
      frame(Guard{p, {Formula::eq(x, Term::constant(0))}}, p, p1, {});
      frame(Guard{p, {Formula::cmp(logic::CmpOp::Ne, x, Term::constant(0))}}, p, p2, {});
      walk(*n->then_branch, cont);
      walk(*n->else_branch, cont);
      return;
    }
    if (auto* n = e.as<Assign>()) {
      int q = body_point(n->next);
      Guard g{p, {}};
      emit(ob::OwnOne{owner(p, n->x, 0)});
      flow(g, slice(p, n->x, 0, 0, local_binding(env_, p)),
           slice(q, n->x, 0, 0, local_binding(env_, q)));
      emit(ob::Split{g, whole(p, n->y), whole(q, n->y),
                     slice(q, n->x, 1, depth(n->x), local_binding(env_, q)), std::nullopt});
      frame(g, p, q, {n->x, n->y});
      walk(*n->next, cont);
      return;
    }
    if (auto* n = e.as<Alias>()) {
      int q = body_point(n->next);
      Guard g{p, {}};
      emit(ob::Shuffle{g, whole(p, n->x), whole(p, n->y), whole(q, n->x), whole(q, n->y),
                       out_.shuffles++});
      frame(g, p, q, {n->x, n->y});
      walk(*n->next, cont);
      return;
    }
    if (auto* n = e.as<AliasDeref>()) {
      int q = body_point(n->next);
      int dy = depth(n->y);
      Guard g{p, {}};
      emit(ob::Shuffle{g, whole(p, n->x), slice(p, n->y, 1, dy, local_binding(env_, p)),
                       whole(q, n->x), slice(q, n->y, 1, dy, local_binding(env_, q)),
                       out_.shuffles++});
      flow(g, slice(p, n->y, 0, 0, local_binding(env_, p)),
           slice(q, n->y, 0, 0, local_binding(env_, q)));
      frame(g, p, q, {n->x, n->y});
      walk(*n->next, cont);
      return;
    }
    if (auto* n = e.as<Assert>()) {
      int q = body_point(n->next);
      emit(ob::Goal{Guard{p, {}}, n->cond});
      frame(Guard{p, {}}, p, q, {});
      walk(*n->next, cont);
      return;
    }
    auto* s = e.as<Seq>();
    int p1 = body_point(s->first), p2 = body_point(s->second);
    frame(Guard{p, {}}, p, p1, {});
    walk(*s->first, Cont{Cont::Kind::Join, p2, {}});
    walk(*s->second, cont);
  }

  void tail(int p, const std::string& x, const Cont& cont) {
    switch (cont.kind) {
    case Cont::Kind::End: return;
    case Cont::Kind::Join: frame(Guard{p, {}}, p, cont.point, {}); return;
    case Cont::Kind::Return: break;
    }
    int e = env_.points.end.at(cont.fn);
    const auto& params = prog_.defs.at(cont.fn).params;
    Guard g{p, {}};
    int d = depth(x);
    std::optional<Term> v;
    if (d == 0) v = Term::var(x);
    Slice ret = slice(e, kRet, 0, d, local_binding(env_, e), v);
    bool is_param = std::find(params.begin(), params.end(), x) != params.end();
    if (is_param)
      emit(ob::Split{g, whole(p, x), ret, whole(e, x), std::nullopt});
    else
      flow(g, whole(p, x), ret);
    for (const auto& prm : params)
      if (prm != x) flow(g, whole(p, prm), whole(e, prm));
  }

  void call(int p, const LetCall& c) {
    const FunDef& f = prog_.defs.at(c.fn);
    int q = env_.points.of(*c.body);
    int b = env_.points.begin.at(c.fn);
    int e = env_.points.end.at(c.fn);

    // Callee predicates see the call string shifted by this label and the
    // actual arguments in place of the integer formals.
    Binding callee;
    if (env_.k > 0) {
      callee.context.push_back(Term::constant(c.label));
      auto ctx = context_params(env_.k - 1);
      callee.context.insert(callee.context.end(), ctx.begin(), ctx.end());
    }
    std::map<std::string, std::string> actual;
    for (std::size_t i = 0; i < f.params.size(); ++i) actual[f.params[i]] = c.args[i];
    for (const auto& v : env_.point(b).fv) callee.fv.push_back(Term::var(actual.at(v)));

    Guard pre{p, {}};
    std::set<std::string> handled{c.x};
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const auto& y = c.args[i];
      int d = depth(y);
      std::optional<Term> v;
      if (d == 0) v = Term::var(y);
      flow(pre, whole(p, y), slice(b, f.params[i], 0, d, callee, v));
    }

    int dr = depth(c.x);
    Guard post{p, {}};
    if (dr == 0)
      post.facts.push_back(leaf_atom(env_, env_.returns.at(c.fn), callee, Term::var(c.x)));
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const auto& y = c.args[i];
      int d = depth(y);
      if (d == 0) continue;   // integers are immutable; the frame keeps the caller's view
      handled.insert(y);
      flow(post, slice(e, f.params[i], 0, d, callee), whole(q, y));
    }
    std::optional<Term> rv;
    if (dr == 0) rv = Term::var(c.x);
    flow(post, slice(e, kRet, 0, dr, callee, rv), whole(q, c.x));
    frame(post, p, q, handled);
  }

  void primitive(int p, const LetCall& c) {
    const prim::Primitive& pr = prim::require(c.fn);
    int q = env_.points.of(*c.body);
    std::vector<Term> args;
    for (const auto& a : c.args) {
      auto it = constants_.find(a);
      args.push_back(it == constants_.end() ? Term::var(a) : Term::constant(it->second));
    }
    Guard g{p, {pr.schema(Term::var(c.x), args)}};
    frame(g, p, q, {c.x});
    flow(g, std::nullopt, whole(q, c.x));
  }
};

} // namespace

Derivation derive(const Program& p, const TemplateEnv& env) { return Deriver(p, env).run(); }

} // namespace ownref::typing
