#include "ownref/refinement/chc.hpp"

#include "ownref/typing/derivation.hpp"

#include <algorithm>
#include <map>

namespace ownref::refinement {

using logic::Formula;
using logic::Term;
using namespace typing;

std::set<int> forced_predicates(const TemplateEnv& env, const ownership::Assignment& solution) {
  std::set<int> out;
  for (const auto& l : wf_link_constraints(env))
    if (l.kind == OwnershipLink::Kind::ForcesTop &&
        solution.at(static_cast<std::size_t>(l.owner)) == 0)
      out.insert(l.predicate);
  return out;
}

namespace {

class Generator {
public:
  Generator(const TemplateEnv& env, const ownership::Assignment& sol)
      : env_(env), sol_(sol), forced_(forced_predicates(env, sol)) {
    for (std::size_t i = 0; i < env.predicates.size(); ++i) index_[env.predicates[i].name] = static_cast<int>(i);
  }

  CHCSystem run(const Derivation& d) {
    for (int p : forced_) {
      const auto& sym = env_.predicates[static_cast<std::size_t>(p)];
      std::vector<Term> args;
      for (int i = 0; i < sym.arity; ++i) args.push_back(Term::var("$a" + std::to_string(i)));
      add({}, Formula::atom(sym.name, args), "unowned " + sym.name);
    }
    for (const auto& o : d.obligations) obligation(o);
    CHCSystem s;
    for (int p : used_) s.predicates.push_back(env_.predicates[static_cast<std::size_t>(p)]);
    s.clauses = std::move(clauses_);
    return s;
  }

private:
  const TemplateEnv& env_;
  const ownership::Assignment& sol_;
  std::set<int> forced_;
  std::map<std::string, int> index_;
  std::set<int> used_;
  std::vector<HornClause> clauses_;

  bool is_forced(const Formula& atom) const {
    auto it = index_.find(atom.pred);
    return it != index_.end() && forced_.count(it->second);
  }

  // Atoms of forced predicates are ⊤.
  Formula prune(const Formula& f) const {
    if (f.kind == Formula::Kind::Atom) return is_forced(f) ? Formula::truth() : f;
    if (f.kids.empty()) return f;
    Formula g = f;
    for (auto& k : g.kids) k = prune(k);
    return g;
  }

  void note(const Formula& f) {
    if (f.kind == Formula::Kind::Atom) {
      auto it = index_.find(f.pred);
      if (it != index_.end()) used_.insert(it->second);
    }
    for (const auto& k : f.kids) note(k);
  }

  void add(std::vector<Formula> body, std::optional<Formula> head, std::string origin) {
    if (head && is_forced(*head) && !origin.starts_with("unowned")) return;
    std::vector<Formula> kept;
    for (auto& b : body) {
      Formula f = prune(b);
      if (f.is_true()) continue;
      if (std::find(kept.begin(), kept.end(), f) != kept.end()) continue;
      note(f);
      kept.push_back(std::move(f));
    }
    if (head) note(*head);
    clauses_.push_back(HornClause{std::move(kept), std::move(head), std::move(origin)});
  }

  // Facts plus the refinements of the integer variables they (or `extra`) mention.
  std::vector<Formula> guard(const Guard& g, const std::vector<Formula>& extra = {}) const {
    std::set<std::string> used;
    for (const auto& f : g.facts) logic::collect_vars(f, used);
    for (const auto& f : extra) logic::collect_vars(f, used);
    std::vector<Formula> out;
    const auto& pt = env_.point(g.point);
    Binding b = local_binding(env_, g.point);
    for (const auto& v : pt.fv)
      if (used.count(v)) out.push_back(leaf_atom(env_, env_.at(g.point, v), b, Term::var(v)));
    out.insert(out.end(), g.facts.begin(), g.facts.end());
    return out;
  }

  bool has_leaf(const Slice& s) const { return s.to == resolve(env_, s.ref).depth(); }

  Formula atom(const Slice& s, const Term& v) const {
    return leaf_atom(env_, resolve(env_, s.ref), s.binding, v);
  }

  std::string where(const Slice& s) const { return s.ref.var + "@" + env_.point(s.ref.point).name; }

  bool owned(int owner) const { return sol_.at(static_cast<std::size_t>(owner)) > 0; }

  // One clause src ⇒ dst on the leaves, with optional extra body facts.
  void sub(const Guard& g, const std::optional<Slice>& src, const Slice& dst,
           const std::optional<Strengthening>& st, const std::string& origin) {
    if (!has_leaf(dst)) return;
    std::optional<Term> sv = src ? src->value : std::nullopt;
    const std::optional<Term>& dv = dst.value;
    Term v = sv ? *sv : dv ? *dv : Term::var(logic::kNu);
    Term dval = dv ? *dv : v;
    std::vector<Formula> extra;
    if (sv && dv && !(*sv == *dv)) extra.push_back(Formula::eq(*sv, *dv));
    if (st && owned(st->owner)) extra.push_back(logic::substitute(st->fact, {{logic::kNu, dval}}));
    std::vector<Formula> mentioned = extra;
    mentioned.push_back(Formula::eq(v, dval));
    std::vector<Formula> body = guard(g, mentioned);
    if (src) body.push_back(atom(*src, v));
    body.insert(body.end(), extra.begin(), extra.end());
    add(std::move(body), atom(dst, dval), origin);
  }

  void obligation(const Obligation& o) {
    if (auto* f = std::get_if<ob::Flow>(&o)) {
      sub(f->guard, f->src, f->dst, f->strengthen,
          f->src ? "flow " + where(*f->src) + " -> " + where(f->dst) : "define " + where(f->dst));
    } else if (auto* s = std::get_if<ob::Split>(&o)) {
      std::string why = "split " + where(s->src);
      sub(s->guard, s->src, s->a, s->strengthen_a, why);
      sub(s->guard, s->src, s->b, std::nullopt, why);
    } else if (auto* sh = std::get_if<ob::Shuffle>(&o)) {
      if (!has_leaf(sh->x)) return;
      Term nu = Term::var(logic::kNu);
      std::string why = "alias " + where(sh->x) + " = " + where(sh->y);
      auto meet = [&](const Slice& a, const Slice& b, const Slice& target) {
        std::vector<Formula> body = guard(sh->guard);
        body.push_back(atom(a, nu));
        body.push_back(atom(b, nu));
        add(std::move(body), atom(target, nu), why);
      };
      meet(sh->x, sh->y, sh->x2);
      meet(sh->x, sh->y, sh->y2);
      meet(sh->x2, sh->y2, sh->x);
      meet(sh->x2, sh->y2, sh->y);
    } else if (auto* goal = std::get_if<ob::Goal>(&o)) {
      std::vector<Formula> body = guard(goal->guard, {goal->cond});
      body.push_back(Formula::negate(goal->cond));
      add(std::move(body), std::nullopt, "assert " + logic::to_string(goal->cond));
    }
  }
};

} // namespace

CHCSystem generate_chc(const Program& p, const TemplateEnv& env,
                       const ownership::Assignment& solution) {
  return Generator(env, solution).run(derive(p, env));
}

} // namespace ownref::refinement
