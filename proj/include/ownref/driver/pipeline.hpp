#pragma once

#include "ownref/backends/solver.hpp"
#include "ownref/frontend/ast.hpp"
#include "ownref/ownership/smt.hpp"
#include "ownref/refinement/chc.hpp"
#include "ownref/semantics/interpreter.hpp"
#include "ownref/typing/templates.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ownref::driver {

struct VerifyConfig {
  int context_depth = 1;
  std::string solver = "spacer";              // spacer | hoice | eldarica | parallel
  std::string ownership_solver = "smt";       // smt | internal
  double timeout = 60;
  std::optional<std::string> dump_templates, dump_ownership, dump_chc;
  int check_dynamic = 0;                      // interpreter runs after a Verified verdict
  std::uint64_t fuel = 20'000;
};

struct Report {
  enum class Verdict { Verified, Rejected, Unknown, ToolError };
  enum class Phase { None, Ownership, Refinement };

  Verdict verdict = Verdict::ToolError;
  Phase phase = Phase::None;
  std::string detail;
  std::optional<std::string> winner;
  std::vector<std::pair<std::string, double>> timings;    // seconds per phase
  std::size_t clauses = 0, ownership_vars = 0, ownership_constraints = 0;
  int annotations = 0;
  int ownership_queries = 0;
  std::vector<std::string> core;                          // infeasible ownership constraints
  std::map<std::string, int> dynamic;                     // outcome name -> count

  int exit_code() const;
  std::string verdict_text() const;    // "verified", "cannot verify (ownership)", ...
};

std::string report_text(const Report& r);

// The stages of the pipeline, usable on their own.
struct Analysis {
  Program program;
  typing::TemplateEnv env;
  ownership::System system;
};

Analysis analyze(const Program& p, int context_depth);

ownership::Solution solve_ownership(const ownership::System& s, const VerifyConfig& cfg);

backends::RaceResult solve_chc(const std::string& script, const VerifyConfig& cfg);

std::string chc_script(const Analysis& a, const ownership::Assignment& solution);

Report verify(const Program& p, const VerifyConfig& cfg);
Report verify_source(std::string_view source, const VerifyConfig& cfg);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

std::vector<semantics::Outcome> interpret(const Program& p, const std::vector<std::uint64_t>& seeds,
                                          std::uint64_t fuel, std::ostream* trace = nullptr);

} // namespace ownref::driver
