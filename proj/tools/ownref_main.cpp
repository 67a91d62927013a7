#include "ownref/driver/bench.hpp"
#include "ownref/driver/pipeline.hpp"
#include "ownref/frontend/desugar.hpp"
#include "ownref/ownership/constraints.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace ownref;

namespace {

void add_pipeline_options(CLI::App* cmd, driver::VerifyConfig& cfg) {
  cmd->add_option("--context-depth,-k", cfg.context_depth, "call-string length k")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--solver", cfg.solver, "CHC backend")
      ->check(CLI::IsMember({"spacer", "hoice", "eldarica", "parallel"}));
  cmd->add_option("--ownership-solver", cfg.ownership_solver, "ownership backend")
      ->check(CLI::IsMember({"smt", "internal"}));
  cmd->add_option("--timeout", cfg.timeout, "seconds per solver query")->check(CLI::PositiveNumber);
}

int tool_error(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ownership refinement type verifier"};
  app.require_subcommand(1);

  driver::VerifyConfig cfg;
  std::string file;

  auto* verify = app.add_subcommand("verify", "verify the assertions of a program");
  verify->add_option("file", file)->required();
  add_pipeline_options(verify, cfg);
  verify->add_option("--dump-templates", cfg.dump_templates, "write templates to a file");
  verify->add_option("--dump-ownership", cfg.dump_ownership, "write the ownership solution");
  verify->add_option("--dump-chc", cfg.dump_chc, "write the Horn clauses");
  verify->add_option("--check-dynamic", cfg.check_dynamic, "interpreter runs after verification");
  verify->add_option("--fuel", cfg.fuel, "step bound for --check-dynamic runs");

  std::vector<std::uint64_t> seeds;
  std::uint64_t fuel = 1'000'000;
  bool trace = false;
  auto* interp = app.add_subcommand("interpret", "run a program on the reference interpreter");
  interp->add_option("file", file)->required();
  interp->add_option("--seed", seeds, "nondeterminism seed (repeatable)");
  interp->add_option("--fuel", fuel, "maximum number of steps");
  interp->add_flag("--trace", trace, "print every rule application");

  std::string dir;
  auto* bench = app.add_subcommand("bench", "verify a corpus against its EXPECT headers");
  bench->add_option("dir", dir)->required();
  add_pipeline_options(bench, cfg);

  std::string what;
  auto* dump = app.add_subcommand("dump", "print an intermediate artifact");
  dump->add_option("what", what)->required()->check(CLI::IsMember({"templates", "ownership", "chc"}));
  dump->add_option("file", file)->required();
  add_pipeline_options(dump, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      auto r = driver::verify_source(driver::read_file(file), cfg);
      std::cout << driver::report_text(r);
      return r.exit_code();
    }
    if (*interp) {
      Program p = frontend::load_program(driver::read_file(file));
      if (seeds.empty()) seeds.push_back(0);
      bool failed = false;
      for (auto s : seeds) {
        auto o = driver::interpret(p, {s}, fuel, trace ? &std::cout : nullptr).front();
        std::cout << "seed " << s << ": " << o.to_string() << "\n";
        failed |= o.kind == semantics::Outcome::Kind::AssertFail;
      }
      return failed ? 1 : 0;
    }
    if (*bench) {
      auto rows = driver::bench(dir, cfg);
      driver::print_table(std::cout, rows);
      for (const auto& r : rows)
        if (!r.ok) return 1;
      return 0;
    }
    if (*dump) {
      Program p = frontend::load_program(driver::read_file(file));
      auto a = driver::analyze(p, cfg.context_depth);
      if (what == "templates") {
        std::cout << typing::dump_templates(a.env);
        return 0;
      }
      auto sol = driver::solve_ownership(a.system, cfg);
      if (sol.status == ownership::Solution::Status::Infeasible) {
        std::cout << "; ownership constraints are infeasible\n";
        for (auto i : sol.core) std::cout << "; " << ownership::describe(a.system, a.system.constraints[i]) << "\n";
        return 1;
      }
      if (sol.status != ownership::Solution::Status::Solved) return tool_error(sol.detail);
      std::cout << (what == "ownership" ? ownership::format_assignment(a.system, sol.values)
                                        : driver::chc_script(a, sol.values));
      return 0;
    }
  } catch (const std::exception& e) {
    return tool_error(e.what());
  }
  return 0;
}
