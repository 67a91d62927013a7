#include "ownref/typing/templates.hpp"

#include <algorithm>

namespace ownref::typing {

namespace {

using namespace ast;

class Assigner {
public:
  Assigner(PointTable& t, const SimpleTypeMap& types) : t_(t), types_(types) {}

  int add(std::string name, const std::string& fn, const Expr* e,
          const std::vector<std::string>& scope) {
    ProgramPoint pt;
    pt.id = static_cast<int>(t_.points.size());
    pt.name = name.empty() ? "p" + std::to_string(pt.id) : std::move(name);
    pt.function = fn;
    pt.expr = e;
    pt.scope = scope;
    std::sort(pt.scope.begin(), pt.scope.end());
    for (const auto& x : pt.scope)
      if (types_.of(x).is_int()) pt.fv.push_back(x);
    if (e) t_.by_expr[e] = pt.id;
    t_.points.push_back(std::move(pt));
    return t_.points.back().id;
  }

  void walk(const Expr& e, const std::string& fn, std::vector<std::string>& scope) {
    add("", fn, &e, scope);
    if (auto* s = e.as<Seq>()) {
      walk(*s->first, fn, scope);
      walk(*s->second, fn, scope);
    } else if (auto* i = e.as<IfZero>()) {
      walk(*i->then_branch, fn, scope);
      walk(*i->else_branch, fn, scope);
    } else if (auto* k = continuation_of(e)) {
      const std::string* b = binder_of(e);
      if (b) scope.push_back(*b);
      walk(**k, fn, scope);
      if (b) scope.pop_back();
    }
  }

private:
  PointTable& t_;
  const SimpleTypeMap& types_;
};

} // namespace

PointTable assign_points(const Program& p, const SimpleTypeMap& types) {
  PointTable t;
  Assigner a(t, types);
  for (const auto& [name, d] : p.defs) {
    t.begin[name] = a.add(name + "^b", name, nullptr, d.params);
    std::vector<std::string> scope = d.params;
    a.walk(*d.body, name, scope);
    t.end[name] = a.add(name + "^e", name, nullptr, d.params);
  }
  std::vector<std::string> scope;
  a.walk(*p.entry, "", scope);
  return t;
}

} // namespace ownref::typing
