#include "golden_traces.hpp"
#include "support.hpp"

#include "ownref/semantics/interpreter.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace ownref;
using semantics::Outcome;

namespace {

struct Traced {
  std::string trace;
  Outcome outcome;
};

Traced trace_of(const std::string& src, std::uint64_t seed = 0) {
  Program p = frontend::load_program(src);
  std::ostringstream os;
  semantics::RunOptions o;
  o.seed = seed;
  o.fuel = 1000;
  o.trace = &os;
  Outcome out = semantics::run(p, o);
  return {os.str(), out};
}

} // namespace

TEST_CASE("golden traces") {
  for (const auto& g : test_support::golden_traces()) {
    SUBCASE(g.rules) {
      auto t = trace_of(g.program);
      CHECK(t.trace == g.trace);
      std::string got = t.outcome.kind == Outcome::Kind::Final ? t.outcome.to_string()
                                                               : semantics::outcome_name(t.outcome.kind);
      CHECK(got == g.outcome);
    }
  }
}

TEST_CASE("recursive calls get fresh registers per activation") {
  auto t = trace_of("count(n) { ifz n then { n } else { let m = n - 1 in count(m) } } "
                    "let k = 2 in count(k)");
  CHECK(t.outcome.to_string() == "Final(0)");
  CHECK(t.trace.find("R-Var") != std::string::npos);
}

TEST_CASE("heap cells are isolated") {
  auto t = trace_of("let a = 1 in let p = mkref a in let q = mkref a in let b = 7 in q := b; "
                    "let v = *p in v");
  CHECK(t.outcome.to_string() == "Final(1)");
}

TEST_CASE("stuck configurations are reported") {
  Program p = frontend::load_program("let x = 1 in let y = *x in y");
  semantics::RunOptions o;
  CHECK(semantics::run(p, o).kind == Outcome::Kind::Stuck);
}

TEST_CASE("fuel bounds divergent programs") {
  Program p = test_support::load("intro2");
  semantics::RunOptions o;
  o.fuel = 500;
  auto out = semantics::run(p, o);
  CHECK(out.kind == Outcome::Kind::OutOfFuel);
  CHECK(out.steps == 500);
}

TEST_CASE("nondeterminism is a function of the seed") {
  const char* src = "let a = _ in let b = _ in let c = a - b in c";
  Program p = frontend::load_program(src);
  std::set<std::string> seen;
  for (std::uint64_t s = 0; s < 20; ++s) {
    semantics::RunOptions o;
    o.seed = s;
    auto x = semantics::run(p, o).to_string();
    CHECK(x == semantics::run(p, o).to_string());
    seen.insert(x);
  }
  CHECK(seen.size() > 1);
}

TEST_CASE("property: every non-value expression decomposes into a single redex") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    test_support::ProgramGen gen(seed);
    Program p = frontend::load_program(gen.program());
    semantics::RunOptions o;
    o.seed = seed;
    semantics::Machine m(p, o);
    for (int i = 0; i < 300; ++i) {
      const Expr* e = m.config().expr;
      if (!m.config().returned && !e->as<ast::Var>()) {
        auto [ctx, redex] = semantics::decompose(*e);
        CHECK(redex->as<ast::Seq>() == nullptr);
        // ctx lists the pending right-hand sides along the left spine, outermost first.
        const Expr* cur = e;
        for (const Expr* c : ctx) {
          auto* s = cur->as<ast::Seq>();
          REQUIRE(s);
          CHECK(s->second.get() == c);
          cur = s->first.get();
        }
        CHECK(cur == redex);
      }
      auto out = m.step();
      if (out) {
        CHECK(out->kind != Outcome::Kind::Stuck);
        break;
      }
    }
  }
}
