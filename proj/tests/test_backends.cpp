#include "support.hpp"

#include "ownref/backends/process.hpp"
#include "ownref/backends/sexpr.hpp"
#include "ownref/backends/solver.hpp"

#include <doctest.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <sys/wait.h>

using namespace ownref::backends;
using test_support::ScratchDir;

namespace {

bool no_children() {
  int st = 0;
  return waitpid(-1, &st, WNOHANG) == -1 && errno == ECHILD;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

SolverSpec stub_spec(const std::string& path, double timeout = 10) {
  SolverSpec s;
  s.kind = SolverKind::Generic;
  s.name = path.substr(path.rfind('/') + 1);
  s.executable = path;
  s.timeout_seconds = timeout;
  return s;
}

} // namespace

TEST_CASE("verdict lines") {
  CHECK(parse_verdict_line("sat") == Verdict::Kind::Sat);
  CHECK(parse_verdict_line("  unsat\r") == Verdict::Kind::Unsat);
  CHECK(parse_verdict_line("unknown") == Verdict::Kind::Unknown);
  CHECK_FALSE(parse_verdict_line("satisfiable"));
  CHECK(first_verdict("banner v1\nunsat\n(model)\nsat\n", false) == Verdict::Kind::Unsat);
  CHECK_FALSE(first_verdict("sa", false));
  CHECK(first_verdict("sat", true) == Verdict::Kind::Sat);
}

TEST_CASE("s-expressions and model values") {
  auto es = parse_sexprs("(define-fun |x$1| () Real (/ 1.0 3.0)) ; c\n(- 2) 0.25");
  REQUIRE(es.size() == 3);
  CHECK(es[0].items[1].atom == "x$1");
  CHECK(*rational_value(es[0].items[4]) == mpq_class(1, 3));
  CHECK(*rational_value(es[1]) == -2);
  CHECK(*rational_value(es[2]) == mpq_class(1, 4));
  CHECK_THROWS(parse_sexprs("(a (b)"));
}

TEST_CASE("run_solver maps stub output to verdicts") {
  ScratchDir d;
  CHECK(run_solver(stub_spec(d.stub("s", 0, "sat\\n")), "x").kind == Verdict::Kind::Sat);
  CHECK(run_solver(stub_spec(d.stub("u", 0, "unsat\\n(proof)\\n")), "x").kind == Verdict::Kind::Unsat);
  CHECK(run_solver(stub_spec(d.stub("n", 0, "unknown")), "x").kind == Verdict::Kind::Unknown);

  std::string err = d.write("err", "#!/bin/sh\necho '(error \"line 1: bad\")'\necho oops >&2\nexit 1\n", true);
  Verdict v = run_solver(stub_spec(err), "x");
  CHECK(v.kind == Verdict::Kind::ProcessError);
  CHECK(v.detail.find("oops") != std::string::npos);

  CHECK(run_solver(stub_spec(d.path() + "/missing"), "x").kind == Verdict::Kind::ProcessError);
  CHECK(no_children());
}

TEST_CASE("run_solver kills a solver that overruns its timeout") {
  ScratchDir d;
  auto t = std::chrono::steady_clock::now();
  Verdict v = run_solver(stub_spec(d.stub("slow", 5, "sat\\n", true), 0.3), "x");
  CHECK(v.kind == Verdict::Kind::Timeout);
  CHECK(seconds_since(t) < 2);
  CHECK(no_children());
}

TEST_CASE("the script reaches the solver as a file argument") {
  ScratchDir d;
  std::string cat = d.write("catter", "#!/bin/sh\ncat \"$1\"\n", true);
  CHECK(run_solver(stub_spec(cat), "; comment\nunsat\n").kind == Verdict::Kind::Unsat);
}

TEST_CASE("run_parallel: first definitive answer wins and the rest are reaped") {
  ScratchDir d;
  auto fast = stub_spec(d.stub("fast-sat", 0.1, "sat\\n"));
  auto slow = stub_spec(d.stub("slow-unknown", 5, "unknown\\n"));
  auto stubborn = stub_spec(d.stub("stubborn", 5, "unsat\\n", true));
  auto t = std::chrono::steady_clock::now();
  RaceResult r = run_parallel({slow, fast, stubborn}, "x");
  CHECK(seconds_since(t) < 1);
  CHECK(r.verdict.kind == Verdict::Kind::Sat);
  REQUIRE(r.winner);
  CHECK(*r.winner == "fast-sat");
  CHECK(no_children());
}

TEST_CASE("run_parallel: best inconclusive verdict without a winner") {
  ScratchDir d;
  auto unk = stub_spec(d.stub("unk", 0.05, "unknown\\n"));
  auto err = stub_spec(d.stub("err", 0, "", false, 2));
  auto slow = stub_spec(d.stub("slow", 3, "sat\\n"), 0.2);
  RaceResult r = run_parallel({err, unk, slow}, "x");
  CHECK(r.verdict.kind == Verdict::Kind::Unknown);
  CHECK_FALSE(r.winner);
  r = run_parallel({err, slow}, "x");
  CHECK(r.verdict.kind == Verdict::Kind::Timeout);
  r = run_parallel({err}, "x");
  CHECK(r.verdict.kind == Verdict::Kind::ProcessError);
  CHECK(no_children());
}

TEST_CASE("run_parallel: disagreement is an error") {
  ScratchDir d;
  auto a = stub_spec(d.stub("says-sat", 0.1, "sat\\n"));
  auto b = stub_spec(d.stub("says-unsat", 0.15, "unsat\\n", true));
  RaceResult r = run_parallel({a, b}, "x");
  CHECK(r.verdict.kind == Verdict::Kind::ProcessError);
  CHECK(r.verdict.detail.find("disagreement") != std::string::npos);
  CHECK_FALSE(r.winner);
  CHECK(no_children());
}

TEST_CASE("solver executables can be overridden from the environment") {
  setenv("CONSORT_HOICE", "/opt/hoice/bin/hoice", 1);
  CHECK(default_spec(SolverKind::Hoice).executable == "/opt/hoice/bin/hoice");
  unsetenv("CONSORT_HOICE");
  CHECK(default_spec(SolverKind::Hoice).executable == "hoice");
  auto spacer = default_spec(SolverKind::Spacer);
  CHECK(spacer.args.at(0) == "fp.engine=spacer");
  CHECK(spacer.timeout_seconds == 60);
}

TEST_CASE("real solver: trivial Horn problems") {
  if (!test_support::have_z3()) {
    MESSAGE("z3 not found; skipped");
    return;
  }
  auto spec = default_spec(SolverKind::Spacer, 30);
  const char* safe = "(set-logic HORN)\n(declare-fun p (Int) Bool)\n"
                     "(assert (forall ((x Int)) (=> (= x 1) (p x))))\n"
                     "(assert (forall ((x Int)) (=> (and (p x) (> x 1)) false)))\n(check-sat)\n";
  CHECK(run_solver(spec, safe).kind == Verdict::Kind::Sat);
  std::string unsafe = safe;
  unsafe.replace(unsafe.find("(> x 1)"), 7, "(> x 0)");
  CHECK(run_solver(spec, unsafe).kind == Verdict::Kind::Unsat);
}
