// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "golden_traces.hpp"
#include "support.hpp"

#include "ownref/backends/process.hpp"
#include "ownref/driver/bench.hpp"
#include "ownref/ownership/exact.hpp"

#include <cerrno>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace ownref;
using namespace ownref::driver;
using test_support::load;

namespace {

using Verdict = Report::Verdict;
using Phase = Report::Phase;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

VerifyConfig real(int k = 1) {
  VerifyConfig c;
  c.context_depth = k;
  c.solver = "spacer";
  c.ownership_solver = "smt";
  c.timeout = 120;
  return c;
}

std::string describe(const Report& r) {
  return r.verdict_text() + (r.detail.empty() ? "" : " [" + r.detail + "]");
}

void expect_verdict(Check& c, const std::string& file, const Report& r, Verdict v,
                    Phase phase = Phase::None) {
  bool ok = r.verdict == v && (phase == Phase::None || r.phase == phase);
  c.expect(ok, file + ": got " + describe(r));
}

std::map<std::string, int> run_seeds(const Program& p, std::uint64_t n, std::uint64_t fuel) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
  std::map<std::string, int> counts;
  for (const auto& o : interpret(p, seeds, fuel)) ++counts[semantics::outcome_name(o.kind)];
  return counts;
}

std::string counts_text(const std::map<std::string, int>& m) {
  std::string s;
  for (auto& [k, v] : m) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

bool no_children() {
  int st = 0;
  return waitpid(-1, &st, WNOHANG) == -1 && errno == ECHILD;
}

// Criteria 1-7 need z3; everything else is self-contained.
Check need_z3() {
  Check c;
  c.expect(test_support::have_z3(), "z3 not found on PATH (pip install z3-solver)");
  return c;
}

Check criterion1() {
  Check c = need_z3();
  if (!c.ok) return c;
  expect_verdict(c, "fig1", verify(load("fig1"), real()), Verdict::Verified);
  expect_verdict(c, "fig1-bug", verify(load("fig1-bug"), real()), Verdict::Rejected);
  return c;
}

Check criterion2() {
  Check c = need_z3();
  if (!c.ok) return c;
  expect_verdict(c, "intro2", verify(load("intro2"), real()), Verdict::Verified);
  expect_verdict(c, "intro2-bug", verify(load("intro2-bug"), real()), Verdict::Rejected);
  auto counts = run_seeds(load("intro2-bug"), 50, 1'000'000);
  c.expect(counts["AssertFail"] == 50, "intro2-bug over 50 seeds: " + counts_text(counts));
  return c;
}

Check criterion3() {
  Check c = need_z3();
  if (!c.ok) return c;
  expect_verdict(c, "fig3 k=1", verify(load("fig3"), real(1)), Verdict::Verified);
  expect_verdict(c, "fig3 k=0", verify(load("fig3"), real(0)), Verdict::Rejected, Phase::Refinement);
  return c;
}

Check criterion4() {
  Check c = need_z3();
  if (!c.ok) return c;
  Report r = verify(load("shuffle"), real());
  expect_verdict(c, "shuffle", r, Verdict::Verified);
  c.expect(r.annotations == 3, "shuffle: " + std::to_string(r.annotations) + " annotations");
  expect_verdict(c, "shuffle-bug", verify(load("shuffle-bug"), real()), Verdict::Rejected);
  return c;
}

Check criterion5() {
  Check c = need_z3();
  if (!c.ok) return c;
  Report r = verify(load("intro2-dup"), real());
  expect_verdict(c, "intro2-dup", r, Verdict::Rejected, Phase::Ownership);
  Analysis a = analyze(load("intro2-dup"), 1);
  c.expect(!ownership::exact::feasible(a.system), "exact checker finds the ownership system feasible");
  auto internal = ownership::solve_ownership_internal(a.system);
  c.expect(internal.status == ownership::Solution::Status::Infeasible && !internal.core.empty(),
           "internal solver does not report an infeasible core");
  return c;
}

Check criterion6() {
  Check c = need_z3();
  if (!c.ok) return c;
  int verified = 0;
  for (const auto& f : std::filesystem::directory_iterator(OWNREF_CORPUS_DIR)) {
    if (f.path().extension() != ".imp") continue;
    std::string name = f.path().stem().string();
    Program p = load(name);
    bool expected = expectation(read_file(f.path().string())) == std::optional<std::string>("verified");
    bool got = verify(p, real()).verdict == Verdict::Verified;
    c.expect(got == expected, name + ": verdict differs from its EXPECT header");
    if (!got) continue;
    ++verified;
    auto counts = run_seeds(p, 200, 20'000);
    bool bad = counts.count("AssertFail") || counts.count("Stuck") || counts.count("AliasFail");
    c.expect(!bad, name + ": " + counts_text(counts));
  }
  c.expect(verified > 0, "no corpus file verified");
  return c;
}

std::string cli_dump(const std::string& file) {
  auto r = backends::run_process({OWNREF_CLI, "dump", "chc", file}, 60);
  return r.out;
}

Check criterion7() {
  Check c = need_z3();
  if (!c.ok) return c;
  for (const char* name : {"fig1", "intro2", "fig3", "shuffle", "ex3_2", "ex3_3"}) {
    std::string scripts[2];
    for (auto& s : scripts) {
      Analysis a = analyze(load(name), 1);
      auto sol = solve_ownership(a.system, real());
      c.expect(sol.status == ownership::Solution::Status::Solved, std::string(name) + ": ownership unsolved");
      if (sol.status != ownership::Solution::Status::Solved) break;
      auto bad = ownership::first_violation(a.system, sol.values);
      c.expect(!bad, std::string(name) + ": model violates constraint " + std::to_string(bad.value_or(0)));
      s = chc_script(a, sol.values);
    }
    c.expect(scripts[0] == scripts[1], std::string(name) + ": CHC scripts differ between runs");
  }
  std::string once = cli_dump(test_support::corpus("fig3"));
  c.expect(!once.empty() && once == cli_dump(test_support::corpus("fig3")),
           "ownref dump chc output differs between processes");
  return c;
}

Check criterion8() {
  Check c;
  const std::set<std::string> rules = {
      "R-Var",    "R-Seq",       "R-Let",      "R-LetInt",      "R-IfTrue",  "R-IfFalse",
      "R-MkRef",  "R-Deref",     "R-Call",     "R-Assign",      "R-Alias",   "R-AliasPtr",
      "R-AliasFail", "R-AliasPtrFail", "R-Assert", "R-AssertFail"};
  std::set<std::string> covered;
  for (const auto& g : test_support::golden_traces()) {
    Program p = frontend::load_program(g.program);
    std::ostringstream os;
    semantics::RunOptions o;
    o.fuel = 1000;
    o.trace = &os;
    auto out = semantics::run(p, o);
    std::string got = out.kind == semantics::Outcome::Kind::Final ? out.to_string()
                                                                  : semantics::outcome_name(out.kind);
    bool ok = os.str() == g.trace && got == g.outcome;
    c.expect(ok, std::string("golden trace for ") + g.rules + " differs");
    if (!ok) continue;
    std::istringstream lines(g.trace);
    for (std::string line; std::getline(lines, line);) covered.insert(line.substr(0, line.find(' ')));
  }
  for (const auto& r : rules) c.expect(covered.count(r) > 0, "no passing golden trace for " + r);
  return c;
}

Check criterion9() {
  Check c;
  test_support::ScratchDir d;
  auto spec = [](const std::string& path) {
    backends::SolverSpec s;
    s.kind = backends::SolverKind::Generic;
    s.name = path.substr(path.rfind('/') + 1);
    s.executable = path;
    s.timeout_seconds = 30;
    return s;
  };
  auto fast = spec(d.stub("fast", 0.1, "sat\\n"));
  auto slow = spec(d.stub("slow", 5, "unknown\\n"));
  auto t = std::chrono::steady_clock::now();
  auto r = backends::run_parallel({slow, fast}, "(check-sat)\n");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  c.expect(r.verdict.kind == backends::Verdict::Kind::Sat, std::string("race verdict ") + backends::verdict_name(r.verdict.kind));
  c.expect(r.winner == std::optional<std::string>("fast"), "race winner is not the fast stub");
  c.expect(dt < 1.0, "race took " + std::to_string(dt) + " s");
  c.expect(no_children(), "solver processes left behind");

  auto says_sat = spec(d.stub("says-sat", 0.1, "sat\\n"));
  auto says_unsat = spec(d.stub("says-unsat", 0.15, "unsat\\n", true));
  r = backends::run_parallel({says_sat, says_unsat}, "(check-sat)\n");
  c.expect(r.verdict.kind == backends::Verdict::Kind::ProcessError,
           std::string("disagreement gives ") + backends::verdict_name(r.verdict.kind));
  c.expect(no_children(), "solver processes left behind after disagreement");
  return c;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"fig1 verifies, *p = 5 variant rejected", criterion1},
      {"intro2 verifies, intro2-bug rejected and fails at runtime", criterion2},
      {"fig3 needs one level of call context", criterion3},
      {"shuffle verifies with three annotations", criterion4},
      {"loop(b, b) rejected by ownership", criterion5},
      {"verified programs never fail dynamically", criterion6},
      {"deterministic CHC output, ownership models re-checked", criterion7},
      {"golden trace per transition rule", criterion8},
      {"solver race and disagreement", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    std::ostringstream line;
    line << "criterion " << i + 1 << ": " << (c.ok ? "PASS" : "FAIL") << "  " << criteria[i].first;
    line.precision(2);
    line << std::fixed << "  (" << dt << " s)";
    std::cout << line.str() << "\n";
    for (const auto& n : c.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    if (!c.ok) ++failed;
  }
  return failed ? 1 : 0;
}
