#include "ownref/ownership/smt.hpp"

#include "ownref/backends/process.hpp"
#include "ownref/backends/sexpr.hpp"
#include "ownref/logic/error.hpp"
#include "ownref/ownership/exact.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ownref::ownership {

namespace {

std::string sym(const std::string& name) { return "|" + name + "|"; }

std::string term(const System& s, const Term& t) {
  if (t.is_var()) return sym(s.vars[static_cast<std::size_t>(t.var)]);
  Rational c = t.constant;
  c.canonicalize();
  std::string n = mpz_class(abs(c.get_num())).get_str() + ".0";
  std::string v = c.get_den() == 1 ? n : "(/ " + n + " " + c.get_den().get_str() + ".0)";
  return c < 0 ? "(- " + v + ")" : v;
}

std::string assertion(const System& s, const Constraint& c) {
  std::string a = term(s, c.a), b = term(s, c.b);
  switch (c.kind) {
  case Constraint::Kind::Eq: return "(= " + a + " " + b + ")";
  case Constraint::Kind::Sum: return "(= " + a + " (+ " + b + " " + term(s, c.c) + "))";
  case Constraint::Kind::Geq: return "(>= " + a + " " + b + ")";
  case Constraint::Kind::ZeroImplies: return "(=> (= " + a + " 0.0) (= " + b + " 0.0))";
  }
  return "true";
}

struct Answer {
  backends::Verdict::Kind verdict = backends::Verdict::Kind::Unknown;
  std::vector<backends::SExpr> rest;
  std::string detail;
};

Answer ask(const backends::SolverSpec& solver, const std::string& script) {
  backends::TempFile file(script, ".smt2");
  std::vector<std::string> argv{solver.executable};
  argv.insert(argv.end(), solver.args.begin(), solver.args.end());
  argv.push_back(file.path());
  backends::ProcessResult r = backends::run_process(argv, solver.timeout_seconds);
  Answer a;
  if (r.timed_out) {
    a.detail = "ownership solver timed out";
    return a;
  }
  std::vector<backends::SExpr> all;
  try {
    all = backends::parse_sexprs(r.out);
  } catch (const Error& e) {
    a.detail = std::string("unreadable solver output: ") + e.what();
    return a;
  }
  if (all.empty() || all[0].is_list) {
    a.detail = "no verdict from ownership solver" + (r.err.empty() ? "" : ": " + r.err);
    return a;
  }
  auto v = backends::parse_verdict_line(all[0].atom);
  if (!v) {
    a.detail = "unexpected solver output: " + r.out.substr(0, 200);
    return a;
  }
  a.verdict = *v;
  a.rest.assign(all.begin() + 1, all.end());
  for (const auto& e : a.rest)
    if (e.is_list && !e.items.empty() && e.items[0].is_atom("error"))
      a.detail = backends::to_string(e);
  return a;
}

std::optional<Assignment> read_model(const System& s, const std::vector<backends::SExpr>& rest) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < s.vars.size(); ++i) index[s.vars[i]] = i;
  Assignment a(s.vars.size(), Rational(0));
  for (const auto& e : rest) {
    if (!e.is_list) continue;
    for (const auto& d : e.items) {
      if (!d.is_list || d.items.size() != 5 || !d.items[0].is_atom("define-fun")) continue;
      auto it = index.find(d.items[1].atom);
      if (it == index.end()) continue;
      auto v = backends::rational_value(d.items[4]);
      if (!v) return std::nullopt;
      a[it->second] = *v;
    }
  }
  return a;
}

Solution unknown(std::string why, int queries) {
  Solution s;
  s.status = Solution::Status::Unknown;
  s.detail = std::move(why);
  s.queries = queries;
  return s;
}

} // namespace

std::string emit_ownership_smt(const System& s, const std::vector<std::string>& extra,
                               bool want_model) {
  std::ostringstream os;
  os << "(set-option :produce-unsat-cores true)\n";
  if (want_model) os << "(set-option :produce-models true)\n";
  os << "(set-logic QF_LRA)\n";
  for (const auto& v : s.vars) os << "(declare-const " << sym(v) << " Real)\n";
  for (const auto& v : s.vars)
    os << "(assert (and (<= 0.0 " << sym(v) << ") (<= " << sym(v) << " 1.0)))\n";
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const Constraint& c = s.constraints[i];
    os << "(assert (! " << assertion(s, c) << " :named c" << i << "))";
    if (!c.origin.empty()) os << " ; " << c.origin;
    os << "\n";
  }
  for (const auto& e : extra) os << "(assert " << e << ")\n";
  os << "(check-sat)\n";
  return os.str();
}

Solution solve_ownership_smt(const System& s, const backends::SolverSpec& solver) {
  Solution out;
  // Feasibility of the hard constraints alone.
  std::string base = emit_ownership_smt(s, {}, true);
  Answer a = ask(solver, base + "(get-model)\n");
  ++out.queries;
  if (a.verdict == backends::Verdict::Kind::Unsat) {
    Answer c = ask(solver, emit_ownership_smt(s) + "(get-unsat-core)\n");
    ++out.queries;
    out.status = Solution::Status::Infeasible;
    for (const auto& e : c.rest) {
      if (!e.is_list) continue;
      for (const auto& name : e.items)
        if (!name.is_list && name.atom.size() > 1 && name.atom[0] == 'c')
          out.core.push_back(std::stoul(name.atom.substr(1)));
    }
    std::sort(out.core.begin(), out.core.end());
    if (out.core.empty()) out.detail = "solver reported no unsat core";
    return out;
  }
  if (a.verdict != backends::Verdict::Kind::Sat)
    return unknown(a.detail.empty() ? "ownership solver answered unknown" : a.detail, out.queries);
  auto model = read_model(s, a.rest);
  if (!model) return unknown("unreadable model", out.queries);

  std::set<int> pos, open;
  for (std::size_t i = 0; i < s.vars.size(); ++i)
    ((*model)[i] > 0 ? pos : open).insert(static_cast<int>(i));

  auto positive = [&](const std::set<int>& vs, const char* joiner) {
    std::string e = std::string("(") + joiner;
    for (int v : vs) e += " (> " + sym(s.vars[static_cast<std::size_t>(v)]) + " 0.0)";
    return e + ")";
  };

  while (!open.empty()) {
    std::vector<std::string> extra;
    if (!pos.empty()) extra.push_back(positive(pos, "and"));
    std::vector<std::string> all = extra;
    all.push_back(positive(open, "and"));
    Answer full = ask(solver, emit_ownership_smt(s, all, true) + "(get-model)\n");
    ++out.queries;
    if (full.verdict == backends::Verdict::Kind::Sat) {
      model = read_model(s, full.rest);
      if (!model) return unknown("unreadable model", out.queries);
      break;
    }
    if (full.verdict != backends::Verdict::Kind::Unsat)
      return unknown(full.detail.empty() ? "ownership solver answered unknown" : full.detail,
                     out.queries);
    extra.push_back(positive(open, "or"));
    Answer some = ask(solver, emit_ownership_smt(s, extra, true) + "(get-model)\n");
    ++out.queries;
    if (some.verdict == backends::Verdict::Kind::Unsat) break;
    if (some.verdict != backends::Verdict::Kind::Sat)
      return unknown(some.detail.empty() ? "ownership solver answered unknown" : some.detail,
                     out.queries);
    model = read_model(s, some.rest);
    if (!model) return unknown("unreadable model", out.queries);
    for (auto it = open.begin(); it != open.end();) {
      if ((*model)[static_cast<std::size_t>(*it)] > 0) {
        pos.insert(*it);
        it = open.erase(it);
      } else {
        ++it;
      }
    }
  }

  if (auto bad = first_violation(s, *model)) {
    std::string what = *bad < s.constraints.size() ? describe(s, s.constraints[*bad]) : "bounds";
    throw SolverFailure("ownership model fails exact re-check: " + what);
  }
  out.status = Solution::Status::Solved;
  out.values = std::move(*model);
  return out;
}

std::vector<std::size_t> minimize_core(const System& s, std::vector<std::size_t> candidates) {
  auto restrict_to = [&](const std::vector<std::size_t>& keep) {
    System r;
    r.vars = s.vars;
    for (auto i : keep) r.constraints.push_back(s.constraints[i]);
    return r;
  };
  for (std::size_t i = 0; i < candidates.size();) {
    std::vector<std::size_t> without = candidates;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    System r = restrict_to(without);
    // ZeroImplies are not part of the relaxation; check them by support maximization.
    if (!exact::max_support(r))
      candidates = std::move(without);
    else
      ++i;
  }
  return candidates;
}

Solution solve_ownership_internal(const System& s) {
  Solution out;
  auto a = exact::max_support(s);
  if (!a) {
    out.status = Solution::Status::Infeasible;
    std::vector<std::size_t> all(s.constraints.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.core = minimize_core(s, std::move(all));
    return out;
  }
  if (auto bad = first_violation(s, *a))
    throw SolverFailure("internal ownership solution fails re-check at constraint " +
                        std::to_string(*bad));
  out.status = Solution::Status::Solved;
  out.values = std::move(*a);
  return out;
}

} // namespace ownref::ownership
