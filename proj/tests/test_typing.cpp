#include "support.hpp"

#include "ownref/logic/error.hpp"
#include "ownref/typing/derivation.hpp"
#include "ownref/typing/simple_types.hpp"
#include "ownref/typing/templates.hpp"

#include <doctest.h>

using namespace ownref;
using namespace ownref::typing;

TEST_CASE("simple types of the running examples") {
  Program p = test_support::load("fig1");
  auto t = infer_simple_types(p);
  CHECK(t.of("p").depth == 1);
  CHECK(t.of("q").depth == 1);
  CHECK(t.functions.at("mk").ret.depth == 1);
  CHECK(t.functions.at("mk").params.at(0).depth == 0);

  auto t2 = infer_simple_types(test_support::load("intro2"));
  CHECK(t2.functions.at("loop").params.at(0).depth == 1);
  CHECK(t2.functions.at("loop").params.at(1).depth == 1);
  CHECK(t2.of("aold").depth == 0);
}

TEST_CASE("ill-typed programs are rejected") {
  CHECK_THROWS_AS(infer_simple_types(frontend::load_program("let x = 1 in let y = *x in y")),
                  SimpleTypeError);
  // a = ref a
  CHECK_THROWS_AS(
      infer_simple_types(frontend::load_program("f(a) { let r = mkref a in f(r) } let z = 0 in f(z)")),
      SimpleTypeError);
  CHECK_THROWS_AS(infer_simple_types(frontend::load_program(
                      "let x = 1 in let p = mkref x in let y = p + x in y")),
                  SimpleTypeError);
}

TEST_CASE("unconstrained variables default to int") {
  auto t = infer_simple_types(frontend::load_program("f(a) { let b = 0 in b } let z = 0 in f(z)"));
  CHECK(t.functions.at("f").params.at(0).depth == 0);
}

TEST_CASE("template dump is stable") {
  Program p = frontend::load_program("let x = 1 in let p = mkref x in x");
  auto env = generate_templates(p, infer_simple_types(p), 1);
  CHECK(dump_templates(env) ==
        "# context depth 1\n"
        "p0 [main] fv()\n"
        "p1 [main] fv(x)\n"
        "  x : {phi.x.0.p1/3}\n"
        "p2 [main] fv(x)\n"
        "  p : {phi.p.1.p2/3} ref(r.p.0.p2)\n"
        "  x : {phi.x.0.p2/3}\n");
}

TEST_CASE("template shape: one owner per reference level, leaf arity 1 + k + |fv|") {
  for (const char* name : {"fig1", "fig3", "intro2", "shuffle"}) {
    for (int k : {0, 1, 2}) {
      CAPTURE(name);
      CAPTURE(k);
      Program p = test_support::load(name);
      auto types = infer_simple_types(p);
      auto env = generate_templates(p, types, k);
      for (const auto& pt : env.points.points) {
        for (const auto& [x, t] : env.gamma[static_cast<std::size_t>(pt.id)]) {
          CHECK(t.depth() == types.of(x).depth);
          CHECK(env.predicates[static_cast<std::size_t>(t.leaf)].arity ==
                1 + k + static_cast<int>(pt.fv.size()));
        }
      }
      // Names are unique.
      std::set<std::string> preds, owners(env.ownership_vars.begin(), env.ownership_vars.end());
      for (const auto& s : env.predicates) preds.insert(s.name);
      CHECK(preds.size() == env.predicates.size());
      CHECK(owners.size() == env.ownership_vars.size());
    }
  }
}

TEST_CASE("well-formedness links cover every reference template") {
  Program p = frontend::load_program("let x = 1 in let a = mkref x in let b = mkref a in x");
  auto env = generate_templates(p, infer_simple_types(p), 1);
  int zero_implies = 0, forces = 0;
  for (const auto& l : wf_link_constraints(env)) {
    if (l.kind == OwnershipLink::Kind::ZeroImplies) ++zero_implies;
    else ++forces;
  }
  // b : int ref ref at the last point gives one ZeroImplies; a at two points and b
  // at one give three ForcesTop.
  CHECK(zero_implies == 1);
  CHECK(forces == 3);
}

TEST_CASE("derivation: assertions become goals and alias annotations shuffles") {
  Program p = test_support::load("shuffle");
  auto env = generate_templates(p, infer_simple_types(p), 1);
  auto d = derive(p, env);
  int goals = 0, shuffles = 0;
  for (const auto& o : d.obligations) {
    if (std::holds_alternative<ob::Goal>(o)) ++goals;
    if (std::holds_alternative<ob::Shuffle>(o)) ++shuffles;
  }
  CHECK(goals == 2);
  CHECK(shuffles == 3);
  CHECK(d.shuffles == 3);
}
