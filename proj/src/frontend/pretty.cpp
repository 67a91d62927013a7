#include "ownref/frontend/pretty.hpp"

#include "ownref/logic/primitives.hpp"

#include <sstream>

namespace ownref::frontend {

namespace {

using namespace ast;

std::string id(const std::string& s) { return s; }

std::string call_rhs(const LetCall& c, const NameMap& name) {
  if (prim::lookup(c.fn)) {
    if (c.args.empty()) return "_";
    if (c.args.size() == 2) return name(c.args[0]) + " " + c.fn + " " + name(c.args[1]);
  }
  std::string s = c.fn + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) s += ", ";
    s += name(c.args[i]);
  }
  return s + ")";
}

logic::Formula rename_all(const logic::Formula& f, const NameMap& name) {
  std::map<std::string, logic::Term> s;
  for (const auto& v : logic::free_vars(f)) s.emplace(v, logic::Term::var(name(v)));
  return logic::substitute(f, s);
}

// Text before the continuation, without trailing newline.
std::string head(const Expr& e, const NameMap& name) {
  if (auto* n = e.as<Var>()) return name(n->x);
  if (auto* n = e.as<LetVar>()) return "let " + name(n->x) + " = " + name(n->y) + " in";
  if (auto* n = e.as<LetInt>()) return "let " + name(n->x) + " = " + n->n.get_str() + " in";
  if (auto* n = e.as<LetMkref>())
    return "let " + name(n->x) + " = mkref " + name(n->y) + " in";
  if (auto* n = e.as<LetDeref>()) return "let " + name(n->x) + " = *" + name(n->y) + " in";
  if (auto* n = e.as<LetCall>()) return "let " + name(n->x) + " = " + call_rhs(*n, name) + " in";
  if (auto* n = e.as<Assign>()) return name(n->x) + " := " + name(n->y) + ";";
  if (auto* n = e.as<Alias>()) return "alias(" + name(n->x) + " = " + name(n->y) + ");";
  if (auto* n = e.as<AliasDeref>()) return "alias(" + name(n->x) + " = *" + name(n->y) + ");";
  if (auto* n = e.as<Assert>()) return "assert(" + logic::to_string(rename_all(n->cond, name)) + ");";
  return {};
}

void print(std::ostringstream& os, const Expr& e, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  const Expr* cur = &e;
  for (;;) {
    if (auto* i = cur->as<IfZero>()) {
      os << pad << "ifz " << i->x << " then {\n";
      print(os, *i->then_branch, indent + 2);
      os << pad << "} else {\n";
      print(os, *i->else_branch, indent + 2);
      os << pad << "}\n";
      return;
    }
    if (auto* s = cur->as<Seq>()) {
      const Expr& first = *s->first;
      if (auto* v = first.as<Var>()) {
        os << pad << v->x << ";\n";
      } else if (first.as<IfZero>()) {
        std::ostringstream inner;
        print(inner, first, indent);
        auto text = inner.str();
        text.pop_back();
        os << text << ";\n";
      } else {
        os << pad << "{\n";
        print(os, first, indent + 2);
        os << pad << "};\n";
      }
      cur = s->second.get();
      continue;
    }
    os << pad << head(*cur, id) << "\n";
    auto* k = continuation_of(*cur);
    if (!k) return;
    cur = k->get();
  }
}

} // namespace

std::string pretty(const Expr& e, int indent) {
  std::ostringstream os;
  print(os, e, indent);
  return os.str();
}

std::string pretty(const Program& p) {
  std::ostringstream os;
  for (const auto& [name, d] : p.defs) {
    os << name << "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) os << (i ? ", " : "") << d.params[i];
    os << ") {\n";
    print(os, *d.body, 2);
    os << "}\n\n";
  }
  print(os, *p.entry, 0);
  return os.str();
}

std::string redex_head(const Expr& e, const NameMap& name) {
  if (auto* i = e.as<IfZero>()) return "ifz " + name(i->x) + " then ... else ...";
  if (e.as<Seq>()) return "...; ...";
  std::string h = head(e, name);
  if (continuation_of(e)) h += " ...";
  return h;
}

} // namespace ownref::frontend
