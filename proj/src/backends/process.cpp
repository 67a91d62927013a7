#include "ownref/backends/process.hpp"

#include "ownref/logic/error.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/prctl.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace ownref::backends {

namespace {

void become_subreaper() {
  static std::once_flag once;
  // Orphaned grandchildren (e.g. `sleep` under a shell stub) are re-parented to
  // us, so killing and reaping a process group leaves nothing behind.
  std::call_once(once, [] { prctl(PR_SET_CHILD_SUBREAPER, 1); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

} // namespace

Child spawn(const std::vector<std::string>& argv) {
  become_subreaper();
  std::string exe = find_executable(argv.at(0));
  if (exe.empty()) throw SolverUnavailable("executable not found: " + argv[0]);

  int out[2], err[2];
  if (pipe2(out, O_CLOEXEC) != 0) throw SolverUnavailable(std::strerror(errno));
  if (pipe2(err, O_CLOEXEC) != 0) {
    ::close(out[0]);
    ::close(out[1]);
    throw SolverUnavailable(std::strerror(errno));
  }

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&fa, out[1], 1);
  posix_spawn_file_actions_adddup2(&fa, err[1], 2);

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setpgroup(&attr, 0);
  sigset_t none, defaults;
  sigemptyset(&none);
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGTERM);
  sigaddset(&defaults, SIGINT);
  sigaddset(&defaults, SIGPIPE);
  posix_spawnattr_setsigmask(&attr, &none);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGMASK |
                                       POSIX_SPAWN_SETSIGDEF);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  Child c;
  int rc = posix_spawn(&c.pid, exe.c_str(), &fa, &attr, args.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  posix_spawnattr_destroy(&attr);
  ::close(out[1]);
  ::close(err[1]);
  if (rc != 0) {
    ::close(out[0]);
    ::close(err[0]);
    throw SolverUnavailable("cannot start " + exe + ": " + std::strerror(rc));
  }
  c.out = out[0];
  c.err = err[0];
  return c;
}

void pump(std::vector<Child*>& children, std::chrono::milliseconds wait) {
  std::vector<pollfd> fds;
  std::vector<std::pair<Child*, bool>> owners;   // bool: stdout
  for (Child* c : children) {
    if (c->out >= 0) {
      fds.push_back({c->out, POLLIN, 0});
      owners.emplace_back(c, true);
    }
    if (c->err >= 0) {
      fds.push_back({c->err, POLLIN, 0});
      owners.emplace_back(c, false);
    }
  }
  if (!fds.empty()) {
    int n = ::poll(fds.data(), fds.size(), static_cast<int>(wait.count()));
    if (n > 0) {
      char buf[8192];
      for (std::size_t i = 0; i < fds.size(); ++i) {
        if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
        auto [c, is_out] = owners[i];
        ssize_t r = ::read(fds[i].fd, buf, sizeof buf);
        if (r > 0) {
          (is_out ? c->out_buf : c->err_buf).append(buf, static_cast<std::size_t>(r));
        } else if (r == 0 || (errno != EINTR && errno != EAGAIN)) {
          close_fd(is_out ? c->out : c->err);
        }
      }
    }
  } else if (wait.count() > 0) {
    ::poll(nullptr, 0, static_cast<int>(std::min<long long>(wait.count(), 5)));
  }
  for (Child* c : children) {
    if (c->exited) continue;
    siginfo_t info{};
    // Observe the exit without reaping, so the group id stays reserved until finish().
    if (waitid(P_PID, static_cast<id_t>(c->pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 &&
        info.si_pid == c->pid)
      c->exited = true;
  }
}

void signal_group(const Child& c, int sig) {
  if (c.pid > 0 && !c.reaped) ::kill(-c.pid, sig);
}

void finish(Child& c) {
  if (c.pid <= 0 || c.reaped) return;
  ::kill(-c.pid, SIGKILL);
  int st = 0;
  if (waitpid(c.pid, &st, 0) == c.pid) c.status = st;
  c.exited = true;
  c.reaped = true;
  // Group members orphaned by the leader were re-parented to us.
  for (;;) {
    pid_t r = waitpid(-c.pid, &st, 0);
    if (r > 0) continue;
    if (r < 0 && errno == EINTR) continue;
    break;
  }
  // Drain what is still buffered in the pipes.
  std::vector<Child*> self{&c};
  for (int i = 0; i < 100 && !c.drained(); ++i) pump(self, std::chrono::milliseconds(0));
  close_fd(c.out);
  close_fd(c.err);
}

void cancel(std::vector<Child*>& children, std::chrono::milliseconds grace) {
  for (Child* c : children)
    if (!c->reaped) signal_group(*c, SIGTERM);
  auto deadline = Clock::now() + grace;
  for (;;) {
    bool all_done = true;
    for (Child* c : children)
      if (!c->reaped && (!c->exited || !c->drained())) all_done = false;
    if (all_done || Clock::now() >= deadline) break;
    pump(children, std::chrono::milliseconds(10));
  }
  for (Child* c : children) finish(*c);
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds) {
  Child c = spawn(argv);
  std::vector<Child*> kids{&c};
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(timeout_seconds));
  ProcessResult r;
  while (!(c.exited && c.drained())) {
    if (Clock::now() >= deadline) {
      r.timed_out = true;
      break;
    }
    pump(kids, std::chrono::milliseconds(c.exited ? 1 : 20));
    if (c.exited && !c.drained()) {
      // The leader is gone; stray group members may still hold the pipes.
      std::vector<Child*> self{&c};
      for (int i = 0; i < 20 && !c.drained(); ++i) pump(self, std::chrono::milliseconds(5));
      break;
    }
  }
  if (r.timed_out)
    cancel(kids, std::chrono::milliseconds(200));
  else
    finish(c);
  r.out = std::move(c.out_buf);
  r.err = std::move(c.err_buf);
  if (!r.timed_out && WIFEXITED(c.status)) r.exit_code = WEXITSTATUS(c.status);
  return r;
}

std::string find_executable(const std::string& name) {
  auto runnable = [](const std::string& p) {
    struct stat st{};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) return runnable(name) ? name : std::string();
  const char* path = std::getenv("PATH");
  std::string dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  std::size_t start = 0;
  while (start <= dirs.size()) {
    auto end = dirs.find(':', start);
    if (end == std::string::npos) end = dirs.size();
    std::string dir = dirs.substr(start, end - start);
    if (dir.empty()) dir = ".";
    std::string cand = dir + "/" + name;
    if (runnable(cand)) return cand;
    start = end + 1;
  }
  return {};
}

TempFile::TempFile(const std::string& text, const std::string& suffix) {
  const char* dir = std::getenv("TMPDIR");
  std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/ownref-XXXXXX" + suffix;
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  int fd = mkstemps(buf.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw Error(std::string("cannot create temporary file: ") + std::strerror(errno));
  path_ = buf.data();
  std::size_t off = 0;
  while (off < text.size()) {
    ssize_t w = ::write(fd, text.data() + off, text.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw Error(std::string("cannot write temporary file: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(w);
  }
  ::close(fd);
}

TempFile::~TempFile() {
  if (!path_.empty()) ::unlink(path_.c_str());
}

} // namespace ownref::backends
