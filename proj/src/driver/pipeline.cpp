#include "ownref/driver/pipeline.hpp"

#include "ownref/backends/process.hpp"
#include "ownref/frontend/desugar.hpp"
#include "ownref/logic/error.hpp"
#include "ownref/ownership/exact.hpp"
#include "ownref/typing/simple_types.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ownref::driver {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::vector<backends::SolverSpec> solver_specs(const VerifyConfig& cfg) {
  using backends::SolverKind;
  if (cfg.solver == "parallel") {
    std::vector<backends::SolverSpec> out;
    for (auto k : {SolverKind::Spacer, SolverKind::Hoice, SolverKind::Eldarica}) {
      auto s = backends::default_spec(k, cfg.timeout);
      if (!backends::find_executable(s.executable).empty()) out.push_back(s);
    }
    if (out.empty()) throw SolverUnavailable("no CHC solver found for parallel mode");
    return out;
  }
  auto kind = backends::parse_kind(cfg.solver);
  if (!kind) throw Error("unknown solver `" + cfg.solver + "`");
  return {backends::default_spec(*kind, cfg.timeout)};
}

} // namespace

int Report::exit_code() const {
  switch (verdict) {
  case Verdict::Verified: return 0;
  case Verdict::Rejected: return 1;
  case Verdict::Unknown: return 2;
  case Verdict::ToolError: return 3;
  }
  return 3;
}

std::string Report::verdict_text() const {
  switch (verdict) {
  case Verdict::Verified: return "verified";
  case Verdict::Rejected:
    return phase == Phase::Ownership ? "cannot verify (ownership)" : "cannot verify (refinement)";
  case Verdict::Unknown: return "unknown";
  case Verdict::ToolError: return "error";
  }
  return "error";
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os << r.verdict_text() << "\n";
  if (!r.detail.empty()) os << "  " << r.detail << "\n";
  for (const auto& c : r.core) os << "  conflict: " << c << "\n";
  os << "  annotations: " << r.annotations << "\n";
  if (r.ownership_vars)
    os << "  ownership: " << r.ownership_vars << " vars, " << r.ownership_constraints
       << " constraints\n";
  if (r.clauses) os << "  clauses: " << r.clauses << "\n";
  if (r.winner) os << "  solver: " << *r.winner << "\n";
  for (const auto& [phase, t] : r.timings) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    os << "  time " << phase << ": " << buf << "s\n";
  }
  for (const auto& [k, n] : r.dynamic) os << "  runs " << k << ": " << n << "\n";
  return os.str();
}

Analysis analyze(const Program& p, int context_depth) {
  auto types = typing::infer_simple_types(p);
  auto env = typing::generate_templates(p, types, context_depth);
  auto sys = ownership::generate_ownership_constraints(p, env);
  return Analysis{p, std::move(env), std::move(sys)};
}

ownership::Solution solve_ownership(const ownership::System& s, const VerifyConfig& cfg) {
  if (cfg.ownership_solver == "internal") return ownership::solve_ownership_internal(s);
  if (cfg.ownership_solver != "smt")
    throw Error("unknown ownership solver `" + cfg.ownership_solver + "`");
  auto spec = backends::default_spec(backends::SolverKind::Generic, cfg.timeout);
  if (const char* z = std::getenv("CONSORT_SPACER"); z && *z) spec.executable = z;
  return ownership::solve_ownership_smt(s, spec);
}

backends::RaceResult solve_chc(const std::string& script, const VerifyConfig& cfg) {
  auto specs = solver_specs(cfg);
  if (specs.size() == 1) {
    backends::RaceResult r{backends::run_solver(specs[0], script), std::nullopt};
    if (r.verdict.definitive()) r.winner = specs[0].name;
    return r;
  }
  return backends::run_parallel(specs, script);
}

std::string chc_script(const Analysis& a, const ownership::Assignment& solution) {
  return refinement::emit_smtlib2_horn(refinement::generate_chc(a.program, a.env, solution));
}

Report verify(const Program& p, const VerifyConfig& cfg) {
  Report r;
  r.annotations = static_cast<int>(count_alias_annotations(p));
  try {
    if (cfg.context_depth < 0) throw Error("context depth must be non-negative");
    if (cfg.timeout <= 0) throw Error("timeout must be positive");

    auto t = Clock::now();
    Analysis a = analyze(p, cfg.context_depth);
    r.timings.emplace_back("templates", since(t));
    r.ownership_vars = a.system.vars.size();
    r.ownership_constraints = a.system.constraints.size();
    if (cfg.dump_templates) write_file(*cfg.dump_templates, typing::dump_templates(a.env));

    t = Clock::now();
    auto sol = solve_ownership(a.system, cfg);
    r.timings.emplace_back("ownership", since(t));
    r.ownership_queries = sol.queries;
    if (sol.status == ownership::Solution::Status::Infeasible) {
      r.verdict = Report::Verdict::Rejected;
      r.phase = Report::Phase::Ownership;
      r.detail = "ownership constraints are infeasible";
      for (auto i : sol.core) r.core.push_back(ownership::describe(a.system, a.system.constraints[i]));
      return r;
    }
    if (sol.status == ownership::Solution::Status::Unknown) {
      r.verdict = Report::Verdict::Unknown;
      r.phase = Report::Phase::Ownership;
      r.detail = sol.detail;
      return r;
    }
    if (cfg.dump_ownership)
      write_file(*cfg.dump_ownership, ownership::format_assignment(a.system, sol.values));

    t = Clock::now();
    auto chc = refinement::generate_chc(a.program, a.env, sol.values);
    r.clauses = chc.clauses.size();
    std::string script = refinement::emit_smtlib2_horn(chc);
    if (cfg.dump_chc) write_file(*cfg.dump_chc, script);
    r.timings.emplace_back("encode", since(t));

    t = Clock::now();
    auto race = solve_chc(script, cfg);
    r.timings.emplace_back("refinement", since(t));
    r.winner = race.winner;
    using K = backends::Verdict::Kind;
    switch (race.verdict.kind) {
    case K::Sat: r.verdict = Report::Verdict::Verified; break;
    case K::Unsat:
      r.verdict = Report::Verdict::Rejected;
      r.phase = Report::Phase::Refinement;
      r.detail = "refinement constraints are unsatisfiable";
      break;
    case K::Unknown:
    case K::Timeout:
      r.verdict = Report::Verdict::Unknown;
      r.phase = Report::Phase::Refinement;
      r.detail = race.verdict.kind == K::Timeout ? "solver timed out" : "solver answered unknown";
      break;
    case K::ProcessError:
      r.verdict = Report::Verdict::ToolError;
      r.detail = race.verdict.detail;
      break;
    }

    if (r.verdict == Report::Verdict::Verified && cfg.check_dynamic > 0) {
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < cfg.check_dynamic; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
      for (const auto& o : interpret(p, seeds, cfg.fuel)) ++r.dynamic[semantics::outcome_name(o.kind)];
      if (r.dynamic.count("AssertFail") || r.dynamic.count("Stuck")) {
        r.verdict = Report::Verdict::ToolError;
        r.detail = "verified program failed at run time";
      }
    }
  } catch (const std::exception& e) {
    r.verdict = Report::Verdict::ToolError;
    r.phase = Report::Phase::None;
    r.detail = e.what();
  }
  return r;
}

Report verify_source(std::string_view source, const VerifyConfig& cfg) {
  Program p;
  try {
    p = frontend::load_program(source);
  } catch (const std::exception& e) {
    Report r;
    r.verdict = Report::Verdict::ToolError;
    r.detail = e.what();
    return r;
  }
  return verify(p, cfg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

std::vector<semantics::Outcome> interpret(const Program& p, const std::vector<std::uint64_t>& seeds,
                                          std::uint64_t fuel, std::ostream* trace) {
  std::vector<semantics::Outcome> out;
  for (auto s : seeds) {
    semantics::RunOptions opts;
    opts.seed = s;
    opts.fuel = fuel;
    opts.trace = trace;
    out.push_back(semantics::run(p, opts));
  }
  return out;
}

} // namespace ownref::driver
