#include "support.hpp"

#include "ownref/ownership/constraints.hpp"
#include "ownref/ownership/exact.hpp"
#include "ownref/ownership/smt.hpp"

#include <doctest.h>

using namespace ownref;
using namespace ownref::ownership;

namespace {

System system_of(const Program& p, int k = 1) { return driver::analyze(p, k).system; }

int var(const System& s, const std::string& name) {
  for (std::size_t i = 0; i < s.vars.size(); ++i)
    if (s.vars[i] == name) return static_cast<int>(i);
  FAIL("no ownership variable " << name);
  return -1;
}

System hand_system() {
  // a = b + c, a = 1, b >= d, c = 0 => d = 0
  System s;
  s.vars = {"a", "b", "c", "d"};
  using K = Constraint::Kind;
  s.constraints.push_back({K::Sum, Term::of(0), Term::of(1), Term::of(2), "split"});
  s.constraints.push_back({K::Eq, Term::of(0), Term::value(1), {}, "own"});
  s.constraints.push_back({K::Geq, Term::of(1), Term::of(3), {}, "flow"});
  s.constraints.push_back({K::ZeroImplies, Term::of(2), Term::of(3), {}, "wf"});
  return s;
}

} // namespace

TEST_CASE("exact solver on a hand-made system") {
  System s = hand_system();
  auto a = exact::max_support(s);
  REQUIRE(a);
  CHECK_FALSE(first_violation(s, *a));
  // b, c and d can all be positive at once (b = c = d = 1/2).
  CHECK(count_positive(*a) == 4);

  // Forcing c = 0 forces d = 0 through the well-formedness implication.
  s.constraints.push_back({Constraint::Kind::Eq, Term::of(2), Term::value(0), {}, "zero"});
  a = exact::max_support(s);
  REQUIRE(a);
  CHECK((*a)[3] == 0);
  CHECK((*a)[1] == 1);

  s.constraints.push_back({Constraint::Kind::Eq, Term::of(1), Term::value(0), {}, "conflict"});
  CHECK_FALSE(exact::feasible(s));
  auto sol = solve_ownership_internal(s);
  CHECK(sol.status == Solution::Status::Infeasible);
  // a = b + c, a = 1, c = 0, b = 0
  CHECK(sol.core == std::vector<std::size_t>{0, 1, 4, 5});
}

TEST_CASE("checker rejects out-of-range and violating assignments") {
  System s = hand_system();
  CHECK(first_violation(s, {1, 1, 0, 0}) == std::optional<std::size_t>{});
  CHECK(first_violation(s, {1, Rational(1, 2), Rational(1, 2), 1}) == std::optional<std::size_t>{2});
  CHECK(first_violation(s, {1, 2, -1, 0}) == std::optional<std::size_t>{s.constraints.size()});
  CHECK(first_violation(s, {1, 1, 0, Rational(1, 3)}) == std::optional<std::size_t>{3});
}

TEST_CASE("Fig. 1: p and q are owned outright at every point") {
  // Hand-built: nothing is shared, so full ownership everywhere satisfies
  // every split and flow.
  System s = system_of(test_support::load("fig1"));
  Assignment all_one(s.vars.size(), Rational(1));
  CHECK_FALSE(first_violation(s, all_one));
  // The writes require exclusive ownership: halving any write point breaks it.
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto& c = s.constraints[i];
    if (c.origin != "write or allocation") continue;
    Assignment half = all_one;
    half[static_cast<std::size_t>(c.a.var)] = Rational(1, 2);
    CHECK(first_violation(s, half).has_value());
  }
}

TEST_CASE("Example 3.2: after the copy only y may write") {
  System s = system_of(test_support::load("ex3_2"));
  auto a = exact::max_support(s);
  REQUIRE(a);
  // y is written afterwards, so r_y = 1 at p3 and the split of x leaves it 0.
  CHECK((*a)[static_cast<std::size_t>(var(s, "r.y.0.p3"))] == 1);
  CHECK((*a)[static_cast<std::size_t>(var(s, "r.x.0.p3"))] == 0);
}

TEST_CASE("loop(b, b) has no ownership assignment") {
  System s = system_of(test_support::load("intro2-dup"));
  CHECK_FALSE(exact::feasible(s));
  auto sol = solve_ownership_internal(s);
  REQUIRE(sol.status == Solution::Status::Infeasible);
  CHECK_FALSE(sol.core.empty());
  // The core is infeasible on its own and minimal.
  System core;
  core.vars = s.vars;
  for (auto i : sol.core) core.constraints.push_back(s.constraints[i]);
  CHECK_FALSE(exact::max_support(core));
  CHECK(exact::feasible(system_of(test_support::load("intro2"))));
}

TEST_CASE("ownership constraints do not depend on k") {
  for (const char* name : {"intro2-dup", "fig3"}) {
    auto s0 = system_of(test_support::load(name), 0);
    auto s2 = system_of(test_support::load(name), 2);
    CHECK(s0.vars == s2.vars);
    CHECK(s0.constraints.size() == s2.constraints.size());
  }
}

TEST_CASE("SMT ownership solving agrees with the exact solver") {
  if (!test_support::have_z3()) {
    MESSAGE("z3 not found; skipped");
    return;
  }
  auto spec = backends::default_spec(backends::SolverKind::Generic, 30);
  for (const char* name : {"fig1", "fig3", "intro2", "shuffle", "ex3_3", "intro2-dup"}) {
    CAPTURE(name);
    System s = system_of(test_support::load(name));
    auto smt = solve_ownership_smt(s, spec);
    auto ex = solve_ownership_internal(s);
    REQUIRE(smt.status == ex.status);
    if (smt.status != Solution::Status::Solved) continue;
    CHECK_FALSE(first_violation(s, smt.values));
    // The support of a maximal solution is unique.
    for (std::size_t i = 0; i < s.vars.size(); ++i) CHECK((smt.values[i] > 0) == (ex.values[i] > 0));
  }
}

TEST_CASE("emitted ownership script names every constraint") {
  System s = hand_system();
  std::string text = emit_ownership_smt(s);
  for (std::size_t i = 0; i < s.constraints.size(); ++i)
    CHECK(text.find(":named c" + std::to_string(i) + ")") != std::string::npos);
  CHECK(text.find("(=> (= |c| 0.0) (= |d| 0.0))") != std::string::npos);
}
