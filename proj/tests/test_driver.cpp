#include "support.hpp"

#include "ownref/driver/bench.hpp"

#include <doctest.h>

#include <sstream>

using namespace ownref;
using namespace ownref::driver;

TEST_CASE("tool errors") {
  VerifyConfig cfg;
  auto r = verify_source("let x = in x", cfg);
  CHECK(r.verdict == Report::Verdict::ToolError);
  CHECK(r.exit_code() == 3);
  CHECK(r.detail.find("1:9") != std::string::npos);

  r = verify_source("let x = 1 in let y = *x in y", cfg);
  CHECK(r.exit_code() == 3);

  cfg.solver = "nosuch";
  CHECK(verify_source("let x = 1 in x", cfg).exit_code() == 3);
}

TEST_CASE("ownership rejection needs no CHC solver and ignores k") {
  for (int k : {0, 1, 2}) {
    VerifyConfig cfg;
    cfg.context_depth = k;
    cfg.ownership_solver = "internal";
    cfg.solver = "eldarica";   // never reached
    Report r = verify(test_support::load("intro2-dup"), cfg);
    CHECK(r.verdict == Report::Verdict::Rejected);
    CHECK(r.phase == Report::Phase::Ownership);
    CHECK(r.exit_code() == 1);
    CHECK(r.verdict_text() == "cannot verify (ownership)");
    CHECK_FALSE(r.core.empty());
  }
}

TEST_CASE("expectation headers") {
  CHECK(expectation("// EXPECT: verified\nlet x = 1 in x") == std::optional<std::string>("verified"));
  CHECK(expectation("// note\n// EXPECT: rejected\n0") == std::optional<std::string>("rejected"));
  CHECK_FALSE(expectation("let x = 1 in x\n// EXPECT: verified"));
}

TEST_CASE("bench on an empty corpus") {
  test_support::ScratchDir d;
  auto rows = bench(d.path(), VerifyConfig{});
  CHECK(rows.empty());
  std::ostringstream os;
  print_table(os, rows);
  CHECK(os.str().find("name") == 0);
}

TEST_CASE("bench flags a mislabeled file") {
  test_support::ScratchDir d;
  d.write("dup.imp", "// EXPECT: verified\n" + read_file(test_support::corpus("intro2-dup")));
  VerifyConfig cfg;
  cfg.ownership_solver = "internal";
  auto rows = bench(d.path(), cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].ok);
  CHECK(rows[0].got == "rejected");
  std::ostringstream os;
  print_table(os, rows);
  CHECK(os.str().find("MISMATCH") != std::string::npos);
}

TEST_CASE("end to end with a real solver") {
  if (!test_support::have_z3()) {
    MESSAGE("z3 not found; skipped");
    return;
  }
  test_support::ScratchDir d;
  VerifyConfig cfg;
  cfg.dump_ownership = d.path() + "/own.txt";
  cfg.dump_chc = d.path() + "/out.smt2";
  cfg.dump_templates = d.path() + "/tmpl.txt";
  cfg.check_dynamic = 20;
  Report r = verify(test_support::load("ex3_3"), cfg);
  CHECK(r.verdict == Report::Verdict::Verified);
  CHECK(r.annotations == 1);
  CHECK(r.dynamic["Final"] == 20);
  CHECK(read_file(*cfg.dump_chc).rfind("(set-logic HORN)", 0) == 0);
  CHECK(read_file(*cfg.dump_ownership).find("r.y.0.p3 = 1/1") != std::string::npos);
  CHECK(read_file(*cfg.dump_templates).rfind("# context depth 1", 0) == 0);
}
