#pragma once

#include <chrono>
#include <string>
#include <sys/types.h>
#include <vector>

namespace ownref::backends {

using Clock = std::chrono::steady_clock;

// A child process in its own process group, stdout/stderr captured.
struct Child {
  pid_t pid = -1;
  int out = -1, err = -1;
  std::string out_buf, err_buf;
  bool exited = false;     // leader has terminated (not yet necessarily reaped)
  bool reaped = false;
  int status = 0;

  bool running() const { return !exited; }
  bool drained() const { return out < 0 && err < 0; }
};

// Throws SolverUnavailable when the executable cannot be started.
Child spawn(const std::vector<std::string>& argv);

// Reads available output from every child for at most `wait`, and notes exits.
void pump(std::vector<Child*>& children, std::chrono::milliseconds wait);

void signal_group(const Child& c, int sig);

// SIGKILLs whatever remains of the child's group and reaps all of it.
void finish(Child& c);

// TERM, wait up to `grace` while reading output, then finish().
void cancel(std::vector<Child*>& children, std::chrono::milliseconds grace);

struct ProcessResult {
  bool timed_out = false;
  int exit_code = -1;      // -1 if killed by a signal
  std::string out, err;
};

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds);

// Absolute path of an executable, searching PATH for bare names; empty if absent.
std::string find_executable(const std::string& name);

// Writes text to a fresh temporary file and removes it on destruction.
class TempFile {
public:
  TempFile(const std::string& text, const std::string& suffix);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

} // namespace ownref::backends
