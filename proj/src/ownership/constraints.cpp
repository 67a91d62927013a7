#include "ownref/ownership/constraints.hpp"

#include "ownref/typing/derivation.hpp"

#include <sstream>

namespace ownref::ownership {

namespace {

using namespace typing;

struct Generator {
  const TemplateEnv& env;
  System sys;

  void add(Constraint::Kind k, Term a, Term b, Term c, std::string origin) {
    sys.constraints.push_back(Constraint{k, std::move(a), std::move(b), std::move(c),
                                         std::move(origin)});
  }

  std::string where(const Slice& s) const {
    return s.ref.var + "@" + env.point(s.ref.point).name;
  }

  // Calls f(level_of_first, level_of_second...) for every reference level shared by the slices.
  template <class F> void levels(const Slice& s, F f) {
    const TypeTemplate& t = resolve(env, s.ref);
    for (int l = s.from; l <= s.to && l < t.depth(); ++l) f(l - s.from);
  }

  int owner(const Slice& s, int offset) const {
    return resolve(env, s.ref).owners.at(static_cast<std::size_t>(s.from + offset));
  }

  void obligation(const Obligation& o) {
    if (auto* f = std::get_if<ob::Flow>(&o)) {
      if (!f->src) return;
      levels(f->dst, [&](int l) {
        add(Constraint::Kind::Geq, Term::of(owner(*f->src, l)), Term::of(owner(f->dst, l)), {},
            "flow " + where(*f->src) + " -> " + where(f->dst));
      });
    } else if (auto* s = std::get_if<ob::Split>(&o)) {
      levels(s->src, [&](int l) {
        add(Constraint::Kind::Sum, Term::of(owner(s->src, l)), Term::of(owner(s->a, l)),
            Term::of(owner(s->b, l)),
            "split " + where(s->src) + " into " + where(s->a) + ", " + where(s->b));
      });
    } else if (auto* sh = std::get_if<ob::Shuffle>(&o)) {
      levels(sh->x, [&](int l) {
        int total = static_cast<int>(sys.vars.size());
        sys.vars.push_back("alias." + std::to_string(sh->id) + "." + std::to_string(l));
        std::string why = "alias " + where(sh->x) + " = " + where(sh->y);
        add(Constraint::Kind::Sum, Term::of(total), Term::of(owner(sh->x, l)),
            Term::of(owner(sh->y, l)), why);
        add(Constraint::Kind::Sum, Term::of(total), Term::of(owner(sh->x2, l)),
            Term::of(owner(sh->y2, l)), why);
      });
    } else if (auto* w = std::get_if<ob::OwnOne>(&o)) {
      add(Constraint::Kind::Eq, Term::of(w->owner), Term::value(1), {}, "write or allocation");
    }
  }
};

std::string term_str(const System& s, const Term& t) {
  return t.is_var() ? s.vars[static_cast<std::size_t>(t.var)] : t.constant.get_str();
}

const Rational& value(const Assignment& a, const Term& t) {
  return t.is_var() ? a[static_cast<std::size_t>(t.var)] : t.constant;
}

} // namespace

System generate_ownership_constraints(const Program& p, const TemplateEnv& env) {
  Generator g{env, {}};
  g.sys.vars = env.ownership_vars;
  for (const auto& o : derive(p, env).obligations) g.obligation(o);
  for (const auto& link : wf_link_constraints(env)) {
    if (link.kind != OwnershipLink::Kind::ZeroImplies) continue;
    g.add(Constraint::Kind::ZeroImplies, Term::of(link.owner), Term::of(link.inner_owner), {},
          "well-formedness");
  }
  return g.sys;
}

std::optional<std::size_t> first_violation(const System& s, const Assignment& a) {
  if (a.size() != s.vars.size()) return s.constraints.size();
  for (const auto& v : a)
    if (v < 0 || v > 1) return s.constraints.size();
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const Constraint& c = s.constraints[i];
    const Rational& x = value(a, c.a);
    bool ok = true;
    switch (c.kind) {
    case Constraint::Kind::Eq: ok = x == value(a, c.b); break;
    case Constraint::Kind::Sum: ok = x == value(a, c.b) + value(a, c.c); break;
    case Constraint::Kind::Geq: ok = x >= value(a, c.b); break;
    case Constraint::Kind::ZeroImplies: ok = x != 0 || value(a, c.b) == 0; break;
    }
    if (!ok) return i;
  }
  return std::nullopt;
}

std::string describe(const System& s, const Constraint& c) {
  std::string a = term_str(s, c.a), b = term_str(s, c.b);
  std::string body;
  switch (c.kind) {
  case Constraint::Kind::Eq: body = a + " = " + b; break;
  case Constraint::Kind::Sum: body = a + " = " + b + " + " + term_str(s, c.c); break;
  case Constraint::Kind::Geq: body = a + " >= " + b; break;
  case Constraint::Kind::ZeroImplies: body = a + " = 0 => " + b + " = 0"; break;
  }
  return c.origin.empty() ? body : body + "  (" + c.origin + ")";
}

std::size_t count_positive(const Assignment& a) {
  std::size_t n = 0;
  for (const auto& v : a)
    if (v > 0) ++n;
  return n;
}

std::string format_assignment(const System& s, const Assignment& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.vars.size(); ++i) {
    Rational v = a[i];
    v.canonicalize();
    os << s.vars[i] << " = " << v.get_num().get_str() << "/" << v.get_den().get_str() << "\n";
  }
  return os.str();
}

} // namespace ownref::ownership
