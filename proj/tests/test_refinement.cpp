#include "support.hpp"

#include "ownref/backends/sexpr.hpp"
#include "ownref/ownership/exact.hpp"
#include "ownref/refinement/chc.hpp"

#include <doctest.h>

#include <map>

using namespace ownref;
using namespace ownref::refinement;
using backends::SExpr;

namespace {

struct Encoded {
  driver::Analysis a;
  ownership::Assignment sol;
  CHCSystem chc;
};

Encoded encode(const std::string& name, int k = 1) {
  auto a = driver::analyze(test_support::load(name), k);
  auto sol = ownership::exact::max_support(a.system);
  REQUIRE(sol);
  auto chc = generate_chc(a.program, a.env, *sol);
  return {std::move(a), *sol, std::move(chc)};
}

void applications(const SExpr& e, const std::map<std::string, std::size_t>& decl,
                  const std::set<std::string>& bound, int& bad_arity, int& unbound) {
  if (!e.is_list) {
    if (!decl.count(e.atom) && !bound.count(e.atom) && e.atom != "true" && e.atom != "false" &&
        !(std::isdigit(static_cast<unsigned char>(e.atom[0]))) && e.atom.find_first_of("+-*<>=") != 0 &&
        e.atom != "and" && e.atom != "or" && e.atom != "not")
      ++unbound;
    return;
  }
  if (!e.items.empty() && !e.items[0].is_list) {
    auto it = decl.find(e.items[0].atom);
    if (it != decl.end() && it->second != e.items.size() - 1) ++bad_arity;
  }
  for (const auto& k : e.items) applications(k, decl, bound, bad_arity, unbound);
}

} // namespace

TEST_CASE("emission is deterministic") {
  for (const char* name : {"fig1", "fig3", "intro2", "shuffle"}) {
    auto e1 = encode(name);
    auto e2 = encode(name);
    CHECK(emit_smtlib2_horn(e1.chc) == emit_smtlib2_horn(e2.chc));
  }
}

TEST_CASE("clauses are well-sorted and closed") {
  for (const char* name : {"fig1", "fig3", "intro2", "shuffle", "ex3_3"}) {
    CAPTURE(name);
    auto e = encode(name);
    auto script = backends::parse_sexprs(emit_smtlib2_horn(e.chc));
    std::map<std::string, std::size_t> decl;
    int bad_arity = 0, unbound = 0, asserts = 0;
    for (const auto& top : script) {
      if (top.items.size() == 4 && top.items[0].is_atom("declare-fun")) {
        decl[top.items[1].atom] = top.items[2].items.size();
        for (const auto& s : top.items[2].items) CHECK(s.is_atom("Int"));
      }
    }
    for (const auto& top : script) {
      if (!top.items[0].is_atom("assert")) continue;
      ++asserts;
      const SExpr& body = top.items[1];
      std::set<std::string> bound;
      const SExpr* impl = &body;
      if (body.is_list && body.items[0].is_atom("forall")) {
        for (const auto& b : body.items[1].items) bound.insert(b.items[0].atom);
        impl = &body.items[2];
      }
      applications(*impl, decl, bound, bad_arity, unbound);
    }
    CHECK(asserts == static_cast<int>(e.chc.clauses.size()));
    CHECK(bad_arity == 0);
    CHECK(unbound == 0);
  }
}

TEST_CASE("zero-ownership predicates only receive the forcing clause") {
  auto e = encode("ex3_2");
  auto forced = forced_predicates(e.a.env, e.sol);
  REQUIRE_FALSE(forced.empty());
  for (int p : forced) {
    const auto& name = e.a.env.predicates[static_cast<std::size_t>(p)].name;
    int heads = 0, forcing = 0;
    for (const auto& c : e.chc.clauses) {
      if (!c.head || c.head->pred != name) continue;
      ++heads;
      if (c.body.empty()) ++forcing;
      for (const auto& b : c.body) CHECK(b.pred != name);
    }
    CHECK(heads == 1);
    CHECK(forcing == 1);
    for (const auto& c : e.chc.clauses)
      for (const auto& b : c.body) CHECK(b.pred != name);
  }
}

TEST_CASE("call clauses shift the context by the call label") {
  auto e = encode("fig3", 1);
  int calls = 0;
  for (const auto& c : e.chc.clauses) {
    if (!c.head) continue;
    bool entry = c.head->pred.find("get^b") != std::string::npos;
    const auto& ctx = c.head->terms.at(1);
    if (entry) {
      ++calls;
      CHECK(ctx.kind == logic::Term::Kind::Const);
    } else if (c.origin.rfind("unowned", 0) != 0) {
      CHECK(ctx.kind == logic::Term::Kind::Var);
      CHECK(ctx.name == "$c1");
    }
  }
  CHECK(calls == 2);

  // k = 0 has no context argument at all.
  auto z = encode("fig3", 0);
  for (const auto& c : z.chc.clauses)
    if (c.head && c.head->pred.find("get^b") != std::string::npos)
      CHECK(c.head->terms.size() == 1);   // get has no integer parameters
}

TEST_CASE("one goal clause per assertion") {
  auto e = encode("fig3");
  int goals = 0;
  for (const auto& c : e.chc.clauses)
    if (!c.head) ++goals;
  CHECK(goals == 2);
}

TEST_CASE("alias shuffles are four clauses, minus those into unowned predicates") {
  auto count = [](const char* name) {
    auto e = encode(name);
    int alias = 0;
    for (const auto& c : e.chc.clauses)
      if (c.origin.rfind("alias", 0) == 0) ++alias;
    return alias;
  };
  // x owns nothing before alias(x = y); its predicate is fixed to true instead.
  CHECK(count("ex3_3") == 3);
  // Write permission swaps between x and y at the first two aliases (2 + 2 clauses);
  // at the last, only y starts out unowned (3 clauses).
  CHECK(count("shuffle") == 7);
}
