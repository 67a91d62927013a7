#include "ownref/typing/templates.hpp"

#include "ownref/logic/error.hpp"

#include <sstream>

namespace ownref::typing {

const TypeTemplate& TemplateEnv::at(int point, const std::string& x) const {
  const auto& g = gamma.at(static_cast<std::size_t>(point));
  auto it = g.find(x);
  if (it == g.end())
    throw Error("no template for `" + x + "` at " + points.points.at(point).name);
  return it->second;
}

const TypeTemplate& TemplateEnv::lookup(int point, const std::string& x) const {
  if (x == kRet) return returns.at(this->point(point).function);
  return at(point, x);
}

namespace {

TypeTemplate make_template(TemplateEnv& env, const std::string& x, const ProgramPoint& pt,
                           int depth) {
  TypeTemplate t;
  for (int i = 0; i < depth; ++i) {
    t.owners.push_back(static_cast<int>(env.ownership_vars.size()));
    env.ownership_vars.push_back("r." + x + "." + std::to_string(i) + "." + pt.name);
  }
  t.leaf = static_cast<int>(env.predicates.size());
  env.predicates.push_back({"phi." + x + "." + std::to_string(depth) + "." + pt.name,
                            1 + env.k + static_cast<int>(pt.fv.size())});
  return t;
}

} // namespace

TemplateEnv generate_templates(const Program& p, const SimpleTypeMap& types, int k) {
  if (k < 0) throw Error("context depth must be non-negative");
  TemplateEnv env;
  env.k = k;
  env.types = types;
  env.points = assign_points(p, types);
  env.gamma.resize(env.points.points.size());
  for (const auto& pt : env.points.points) {
    auto& g = env.gamma[static_cast<std::size_t>(pt.id)];
    for (const auto& x : pt.scope) g.emplace(x, make_template(env, x, pt, types.of(x).depth));
  }
  for (const auto& [fn, end] : env.points.end) {
    const auto& pt = env.point(end);
    env.returns.emplace(fn, make_template(env, kRet, pt, types.functions.at(fn).ret.depth));
  }
  return env;
}

std::vector<OwnershipLink> wf_link_constraints(const TemplateEnv& env) {
  std::vector<OwnershipLink> out;
  auto visit = [&](const TypeTemplate& t) {
    int d = t.depth();
    for (int i = 0; i + 1 < d; ++i)
      out.push_back({OwnershipLink::Kind::ZeroImplies, t.owners[i], t.owners[i + 1], -1});
    if (d > 0) out.push_back({OwnershipLink::Kind::ForcesTop, t.owners[d - 1], -1, t.leaf});
  };
  for (const auto& g : env.gamma)
    for (const auto& [x, t] : g) visit(t);
  for (const auto& [fn, t] : env.returns) visit(t);
  return out;
}

namespace {

std::string show(const TemplateEnv& env, const TypeTemplate& t) {
  const auto& pred = env.predicates[static_cast<std::size_t>(t.leaf)];
  std::string s = "{" + pred.name + "/" + std::to_string(pred.arity) + "}";
  for (int i = t.depth() - 1; i >= 0; --i)
    s += " ref(" + env.ownership_vars[static_cast<std::size_t>(t.owners[i])] + ")";
  return s;
}

} // namespace

std::string dump_templates(const TemplateEnv& env) {
  std::ostringstream os;
  os << "# context depth " << env.k << "\n";
  for (const auto& pt : env.points.points) {
    os << pt.name << " [" << (pt.function.empty() ? "main" : pt.function) << "] fv(";
    for (std::size_t i = 0; i < pt.fv.size(); ++i) os << (i ? " " : "") << pt.fv[i];
    os << ")\n";
    for (const auto& [x, t] : env.gamma[static_cast<std::size_t>(pt.id)])
      os << "  " << x << " : " << show(env, t) << "\n";
    if (!pt.function.empty() && env.points.end.at(pt.function) == pt.id)
      os << "  " << kRet << " : " << show(env, env.returns.at(pt.function)) << "\n";
  }
  return os.str();
}

} // namespace ownref::typing
