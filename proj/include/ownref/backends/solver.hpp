#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ownref::backends {

enum class SolverKind { Spacer, Hoice, Eldarica, Generic };

const char* kind_name(SolverKind k);
std::optional<SolverKind> parse_kind(std::string_view s);

struct SolverSpec {
  SolverKind kind = SolverKind::Spacer;
  std::string name;                  // reported as the race winner
  std::string executable;
  std::vector<std::string> args;     // placed before the script path
  double timeout_seconds = 60;
};

// Executable from CONSORT_SPACER / CONSORT_HOICE / CONSORT_ELDARICA when set,
// otherwise the kind's conventional command name and arguments.
SolverSpec default_spec(SolverKind kind, double timeout_seconds = 60);

struct Verdict {
  enum class Kind { Sat, Unsat, Unknown, Timeout, ProcessError };
  Kind kind = Kind::Unknown;
  std::string detail;

  bool definitive() const { return kind == Kind::Sat || kind == Kind::Unsat; }
};

const char* verdict_name(Verdict::Kind k);

// The verdict named by a whole line, ignoring surrounding whitespace.
std::optional<Verdict::Kind> parse_verdict_line(std::string_view line);
// First verdict among the complete lines of `text`.
std::optional<Verdict::Kind> first_verdict(std::string_view text, bool include_partial_tail);

std::vector<std::string> command_line(const SolverSpec& spec, const std::string& script_path);

Verdict run_solver(const SolverSpec& spec, const std::string& script);

struct RaceResult {
  Verdict verdict;
  std::optional<std::string> winner;
};

RaceResult run_parallel(const std::vector<SolverSpec>& specs, const std::string& script,
                        double grace_seconds = 0.2);

} // namespace ownref::backends
