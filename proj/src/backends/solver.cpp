#include "ownref/backends/solver.hpp"

#include "ownref/backends/process.hpp"
#include "ownref/logic/error.hpp"

#include <cstdlib>
#include <signal.h>
#include <sys/wait.h>

namespace ownref::backends {

namespace {

struct KindConfig {
  SolverKind kind;
  const char* name;
  const char* env;
  const char* command;
  std::vector<std::string> args;
};

const std::vector<KindConfig>& kinds() {
  static const std::vector<KindConfig> table = {
      {SolverKind::Spacer, "spacer", "CONSORT_SPACER", "z3", {"fp.engine=spacer", "fp.xform.inline_eager=false"}},
      {SolverKind::Hoice, "hoice", "CONSORT_HOICE", "hoice", {}},
      {SolverKind::Eldarica, "eldarica", "CONSORT_ELDARICA", "eld", {}},
      {SolverKind::Generic, "generic-smtlib2", nullptr, "z3", {}},
  };
  return table;
}

const KindConfig& config(SolverKind k) {
  for (const auto& c : kinds())
    if (c.kind == k) return c;
  return kinds().back();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string tail(const std::string& s, std::size_t n = 400) {
  return s.size() <= n ? s : "..." + s.substr(s.size() - n);
}

std::string exit_detail(const Child& c) {
  if (WIFEXITED(c.status)) return "exit status " + std::to_string(WEXITSTATUS(c.status));
  if (WIFSIGNALED(c.status)) return "killed by signal " + std::to_string(WTERMSIG(c.status));
  return "abnormal termination";
}

Verdict final_verdict(const Child& c, bool timed_out) {
  if (auto v = first_verdict(c.out_buf, !timed_out)) return Verdict{*v, {}};
  if (timed_out) return Verdict{Verdict::Kind::Timeout, {}};
  std::string why = exit_detail(c);
  std::string err = c.err_buf.empty() ? c.out_buf : c.err_buf;
  return Verdict{Verdict::Kind::ProcessError,
                 "no verdict (" + why + ")" + (err.empty() ? "" : ": " + tail(err))};
}

int rank(Verdict::Kind k) {
  switch (k) {
  case Verdict::Kind::Unknown: return 2;
  case Verdict::Kind::Timeout: return 1;
  default: return 0;
  }
}

} // namespace

const char* kind_name(SolverKind k) { return config(k).name; }

std::optional<SolverKind> parse_kind(std::string_view s) {
  for (const auto& c : kinds())
    if (s == c.name) return c.kind;
  if (s == "generic") return SolverKind::Generic;
  return std::nullopt;
}

SolverSpec default_spec(SolverKind kind, double timeout_seconds) {
  const KindConfig& c = config(kind);
  SolverSpec s;
  s.kind = kind;
  s.name = c.name;
  s.executable = c.command;
  if (c.env) {
    if (const char* v = std::getenv(c.env); v && *v) s.executable = v;
  }
  s.args = c.args;
  s.timeout_seconds = timeout_seconds;
  return s;
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
  case Verdict::Kind::Sat: return "sat";
  case Verdict::Kind::Unsat: return "unsat";
  case Verdict::Kind::Unknown: return "unknown";
  case Verdict::Kind::Timeout: return "timeout";
  case Verdict::Kind::ProcessError: return "error";
  }
  return "?";
}

std::optional<Verdict::Kind> parse_verdict_line(std::string_view line) {
  line = trim(line);
  if (line == "sat") return Verdict::Kind::Sat;
  if (line == "unsat") return Verdict::Kind::Unsat;
  if (line == "unknown") return Verdict::Kind::Unknown;
  return std::nullopt;
}

std::optional<Verdict::Kind> first_verdict(std::string_view text, bool include_partial_tail) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (!include_partial_tail) return std::nullopt;
      nl = text.size();
    }
    if (auto v = parse_verdict_line(text.substr(start, nl - start))) return v;
    start = nl + 1;
  }
  return std::nullopt;
}

std::vector<std::string> command_line(const SolverSpec& spec, const std::string& script_path) {
  std::vector<std::string> argv{spec.executable};
  argv.insert(argv.end(), spec.args.begin(), spec.args.end());
  argv.push_back(script_path);
  return argv;
}

Verdict run_solver(const SolverSpec& spec, const std::string& script) {
  TempFile file(script, ".smt2");
  ProcessResult r;
  try {
    r = run_process(command_line(spec, file.path()), spec.timeout_seconds);
  } catch (const SolverUnavailable& e) {
    return Verdict{Verdict::Kind::ProcessError, e.what()};
  }
  if (auto v = first_verdict(r.out, !r.timed_out)) return Verdict{*v, {}};
  if (r.timed_out) return Verdict{Verdict::Kind::Timeout, {}};
  std::string err = r.err.empty() ? r.out : r.err;
  return Verdict{Verdict::Kind::ProcessError,
                 "no verdict (exit status " + std::to_string(r.exit_code) + ")" +
                     (err.empty() ? "" : ": " + tail(err))};
}

RaceResult run_parallel(const std::vector<SolverSpec>& specs, const std::string& script,
                        double grace_seconds) {
  if (specs.empty()) throw Error("run_parallel needs at least one solver");
  TempFile file(script, ".smt2");

  struct Entrant {
    const SolverSpec* spec;
    Child child;
    bool started = false;
    bool timed_out = false;
    Clock::time_point deadline;
    std::optional<Verdict> verdict;
  };
  std::vector<Entrant> es;
  es.reserve(specs.size());
  for (const auto& s : specs) {
    Entrant e{&s, {}, false, false, {}, std::nullopt};
    try {
      e.child = spawn(command_line(s, file.path()));
      e.started = true;
      e.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(s.timeout_seconds));
    } catch (const SolverUnavailable& ex) {
      e.verdict = Verdict{Verdict::Kind::ProcessError, ex.what()};
    }
    es.push_back(std::move(e));
  }

  std::vector<Child*> live;
  for (auto& e : es)
    if (e.started) live.push_back(&e.child);

  std::optional<std::size_t> winner;
  auto scan = [&] {
    for (std::size_t i = 0; i < es.size(); ++i) {
      auto& e = es[i];
      if (!e.started || e.verdict) continue;
      auto v = first_verdict(e.child.out_buf, e.child.exited && e.child.drained());
      if (v && (*v == Verdict::Kind::Sat || *v == Verdict::Kind::Unsat)) {
        e.verdict = Verdict{*v, {}};
        if (!winner) winner = i;
      }
    }
  };

  while (!winner) {
    bool any_running = false;
    for (auto& e : es) {
      if (!e.started || e.verdict) continue;
      if (e.child.exited && e.child.drained()) {
        finish(e.child);
        e.verdict = final_verdict(e.child, false);
        if (e.verdict->definitive() && !winner) winner = static_cast<std::size_t>(&e - es.data());
        continue;
      }
      if (Clock::now() >= e.deadline) {
        std::vector<Child*> one{&e.child};
        cancel(one, std::chrono::milliseconds(static_cast<long>(grace_seconds * 1000)));
        e.timed_out = true;
        e.verdict = final_verdict(e.child, true);
        continue;
      }
      any_running = true;
    }
    scan();
    if (winner || !any_running) break;
    pump(live, std::chrono::milliseconds(10));
  }

  // Cancel the rest, still listening for late definitive answers.
  std::vector<Child*> rest;
  for (auto& e : es)
    if (e.started && !e.child.reaped) rest.push_back(&e.child);
  if (!rest.empty()) cancel(rest, std::chrono::milliseconds(static_cast<long>(grace_seconds * 1000)));
  scan();

  RaceResult out;
  if (winner) {
    const Verdict& w = *es[*winner].verdict;
    for (const auto& e : es) {
      if (e.verdict && e.verdict->definitive() && e.verdict->kind != w.kind) {
        out.verdict = Verdict{Verdict::Kind::ProcessError,
                              std::string("solver disagreement: ") + es[*winner].spec->name +
                                  " says " + verdict_name(w.kind) + ", " + e.spec->name + " says " +
                                  verdict_name(e.verdict->kind)};
        return out;
      }
    }
    out.verdict = w;
    out.winner = es[*winner].spec->name;
    return out;
  }
  Verdict best{Verdict::Kind::ProcessError, "no solver produced a verdict"};
  int best_rank = -1;
  for (auto& e : es) {
    Verdict v = e.verdict ? *e.verdict : final_verdict(e.child, e.timed_out);
    if (rank(v.kind) > best_rank) {
      best = v;
      best_rank = rank(v.kind);
    }
  }
  out.verdict = best;
  return out;
}

} // namespace ownref::backends
