#pragma once

#include <string>
#include <vector>

namespace test_support {

// Expected traces were written by applying the transition rules by hand.
// `outcome` is the full outcome text for Final, otherwise just the kind.
struct GoldenTrace {
  const char* rules;
  const char* program;
  const char* trace;
  const char* outcome;
};

inline const std::vector<GoldenTrace>& golden_traces() {
  static const std::vector<GoldenTrace> all = {
    {"R-LetInt R-Call R-Var R-Let",
     "id(a) { a } let x = 1 in let y = id(x) in y",
     "R-LetInt let x = 1 in ...\n"
     "R-Call let y = id(x$1) in ...\n"
     "R-Var x$1\n"
     "R-Let let y = x$1 in ...\n",
     "Final(1)"},
    {"R-MkRef R-Let R-Assign R-Deref R-Assert R-Seq",
     "let x = 1 in let p = mkref x in let q = p in let y = 2 in q := y; "
     "let z = *p in assert(z = 2); { let a = 3 in a }; z",
     "R-LetInt let x = 1 in ...\n"
     "R-MkRef let p = mkref x$1 in ...\n"
     "R-Let let q = p$2 in ...\n"
     "R-LetInt let y = 2 in ...\n"
     "R-Assign q$3 := y$4; ...\n"
     "R-Deref let z = *p$2 in ...\n"
     "R-Assert assert(z$5 = 2); ...\n"
     "R-LetInt let a = 3 in ...\n"
     "R-Seq a$6\n",
     "Final(2)"},
    {"R-IfTrue",
     "let z = 0 in ifz z then { let a = 1 in a } else { let b = 2 in b }",
     "R-LetInt let z = 0 in ...\n"
     "R-IfTrue ifz z$1 then ... else ...\n"
     "R-LetInt let a = 1 in ...\n",
     "Final(1)"},
    {"R-IfFalse",
     "let z = 3 in ifz z then { let a = 1 in a } else { let b = 2 in b }",
     "R-LetInt let z = 3 in ...\n"
     "R-IfFalse ifz z$1 then ... else ...\n"
     "R-LetInt let b = 2 in ...\n",
     "Final(2)"},
    {"R-Alias",
     "let n = 0 in let x = mkref n in let y = x in alias(x = y); n",
     "R-LetInt let n = 0 in ...\n"
     "R-MkRef let x = mkref n$1 in ...\n"
     "R-Let let y = x$2 in ...\n"
     "R-Alias alias(x$2 = y$3); ...\n",
     "Final(0)"},
    {"R-AliasFail",
     "let n = 0 in let x = mkref n in let y = mkref n in alias(x = y); n",
     "R-LetInt let n = 0 in ...\n"
     "R-MkRef let x = mkref n$1 in ...\n"
     "R-MkRef let y = mkref n$1 in ...\n"
     "R-AliasFail alias(x$2 = y$3); ...\n",
     "AliasFail"},
    {"R-AliasPtr",
     "let n = 0 in let x = mkref n in let p = mkref x in alias(x = *p); n",
     "R-LetInt let n = 0 in ...\n"
     "R-MkRef let x = mkref n$1 in ...\n"
     "R-MkRef let p = mkref x$2 in ...\n"
     "R-AliasPtr alias(x$2 = *p$3); ...\n",
     "Final(0)"},
    {"R-AliasPtrFail",
     "let n = 0 in let x = mkref n in let w = mkref n in let p = mkref w in alias(x = *p); n",
     "R-LetInt let n = 0 in ...\n"
     "R-MkRef let x = mkref n$1 in ...\n"
     "R-MkRef let w = mkref n$1 in ...\n"
     "R-MkRef let p = mkref w$3 in ...\n"
     "R-AliasPtrFail alias(x$2 = *p$4); ...\n",
     "AliasFail"},
    {"R-AssertFail",
     "let n = 1 in assert(n = 1); assert(n = 2); n",
     "R-LetInt let n = 1 in ...\n"
     "R-Assert assert(n$1 = 1); ...\n"
     "R-AssertFail assert(n$1 = 2); ...\n",
     "AssertFail"},
    {"R-Prim",
     "let a = 2 in let c = 1 in let b = a + c in b",
     "R-LetInt let a = 2 in ...\n"
     "R-LetInt let c = 1 in ...\n"
     "R-Prim let b = a$1 + c$2 in ...\n",
     "Final(3)"},
  };
  return all;
}

} // namespace test_support
