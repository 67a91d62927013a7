#include "ownref/typing/simple_types.hpp"

#include "ownref/logic/error.hpp"
#include "ownref/logic/primitives.hpp"

namespace ownref::typing {

std::string SimpleType::to_string() const {
  std::string s = "int";
  for (int i = 0; i < depth; ++i) s += " ref";
  return s;
}

const SimpleType& SimpleTypeMap::of(const std::string& x) const {
  auto it = vars.find(x);
  if (it == vars.end()) throw SimpleTypeError("no simple type for `" + x + "`");
  return it->second;
}

namespace {

using namespace ast;

// Union-find over shape terms.
class Unifier {
public:
  enum class Kind { Unknown, Int, Ref };

  int fresh() {
    nodes_.push_back({Kind::Unknown, -1, static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }
  int integer() {
    int n = fresh();
    nodes_[n].kind = Kind::Int;
    return n;
  }
  int ref(int inner) {
    int n = fresh();
    nodes_[n].kind = Kind::Ref;
    nodes_[n].child = inner;
    return n;
  }

  int find(int n) {
    while (nodes_[n].parent != n) {
      nodes_[n].parent = nodes_[nodes_[n].parent].parent;
      n = nodes_[n].parent;
    }
    return n;
  }

  void unify(int a, int b, const std::string& where) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (na.kind == Kind::Unknown) {
      if (occurs(a, b)) fail(a, b, where, "cyclic shape");
      na.parent = b;
      return;
    }
    if (nb.kind == Kind::Unknown) {
      if (occurs(b, a)) fail(a, b, where, "cyclic shape");
      nb.parent = a;
      return;
    }
    if (na.kind != nb.kind) fail(a, b, where, "shape mismatch");
    int ca = na.child, cb = nb.child;
    na.parent = b;
    if (ca >= 0) unify(ca, cb, where);
  }

  std::string show(int n) {
    n = find(n);
    switch (nodes_[n].kind) {
    case Kind::Unknown: return "'t" + std::to_string(n);
    case Kind::Int: return "int";
    case Kind::Ref: return show(nodes_[n].child) + " ref";
    }
    return "?";
  }

  // Unconstrained shapes default to int.
  SimpleType resolve(int n) {
    SimpleType t;
    for (n = find(n); nodes_[n].kind == Kind::Ref; n = find(nodes_[n].child)) ++t.depth;
    return t;
  }

private:
  struct Node {
    Kind kind;
    int child;
    int parent;
  };
  std::vector<Node> nodes_;

  bool occurs(int var, int in) {
    in = find(in);
    if (in == var) return true;
    return nodes_[in].kind == Kind::Ref && occurs(var, nodes_[in].child);
  }

  [[noreturn]] void fail(int a, int b, const std::string& where, const char* what) {
    throw SimpleTypeError(std::string(what) + " at " + where + ": " + show(a) + " vs " + show(b));
  }
};

class Inference {
public:
  explicit Inference(const Program& p) : prog_(p) {}

  SimpleTypeMap run() {
    for (const auto& [name, d] : prog_.defs) {
      Sig s;
      for (const auto& x : d.params) s.params.push_back(var(x));
      s.ret = u_.fresh();
      sigs_[name] = s;
    }
    for (const auto& [name, d] : prog_.defs)
      u_.unify(expr(*d.body), sigs_[name].ret, "return of " + name);
    expr(*prog_.entry);

    SimpleTypeMap out;
    for (const auto& [x, n] : vars_) out.vars[x] = u_.resolve(n);
    for (const auto& [f, s] : sigs_) {
      FunctionType ft;
      for (int n : s.params) ft.params.push_back(u_.resolve(n));
      ft.ret = u_.resolve(s.ret);
      out.functions[f] = ft;
    }
    return out;
  }

private:
  struct Sig {
    std::vector<int> params;
    int ret = -1;
  };
  const Program& prog_;
  Unifier u_;
  std::map<std::string, int> vars_;
  std::map<std::string, Sig> sigs_;

  int var(const std::string& x) {
    auto it = vars_.find(x);
    if (it != vars_.end()) return it->second;
    int n = u_.fresh();
    vars_[x] = n;
    return n;
  }

  int expr(const Expr& e) {
    if (auto* n = e.as<Var>()) return var(n->x);
    if (auto* n = e.as<LetVar>()) {
      u_.unify(var(n->x), var(n->y), "let " + n->x);
      return expr(*n->body);
    }
    if (auto* n = e.as<LetInt>()) {
      u_.unify(var(n->x), u_.integer(), "let " + n->x);
      return expr(*n->body);
    }
    if (auto* n = e.as<LetMkref>()) {
      u_.unify(var(n->x), u_.ref(var(n->y)), "let " + n->x + " = mkref " + n->y);
      return expr(*n->body);
    }
    if (auto* n = e.as<LetDeref>()) {
      u_.unify(var(n->y), u_.ref(var(n->x)), "let " + n->x + " = *" + n->y);
      return expr(*n->body);
    }
    if (auto* n = e.as<LetCall>()) {
      std::string where = "call to " + n->fn;
      if (auto it = sigs_.find(n->fn); it != sigs_.end()) {
        for (std::size_t i = 0; i < n->args.size(); ++i)
          u_.unify(var(n->args[i]), it->second.params.at(i), where);
        u_.unify(var(n->x), it->second.ret, where);
      } else {
        prim::require(n->fn);
        for (const auto& a : n->args) u_.unify(var(a), u_.integer(), where);
        u_.unify(var(n->x), u_.integer(), where);
      }
      return expr(*n->body);
    }
    if (auto* n = e.as<IfZero>()) {
      u_.unify(var(n->x), u_.integer(), "ifz " + n->x);
      int a = expr(*n->then_branch);
      int b = expr(*n->else_branch);
      u_.unify(a, b, "branches of ifz " + n->x);
      return a;
    }
    if (auto* n = e.as<Assign>()) {
      u_.unify(var(n->x), u_.ref(var(n->y)), n->x + " := " + n->y);
      return expr(*n->next);
    }
    if (auto* n = e.as<Alias>()) {
      u_.unify(var(n->x), var(n->y), "alias(" + n->x + " = " + n->y + ")");
      return expr(*n->next);
    }
    if (auto* n = e.as<AliasDeref>()) {
      u_.unify(var(n->y), u_.ref(var(n->x)), "alias(" + n->x + " = *" + n->y + ")");
      return expr(*n->next);
    }
    if (auto* n = e.as<Assert>()) {
      for (const auto& v : logic::free_vars(n->cond)) u_.unify(var(v), u_.integer(), "assert");
      return expr(*n->next);
    }
    auto* s = e.as<Seq>();
    expr(*s->first);
    return expr(*s->second);
  }
};

} // namespace

SimpleTypeMap infer_simple_types(const Program& p) { return Inference(p).run(); }

} // namespace ownref::typing
