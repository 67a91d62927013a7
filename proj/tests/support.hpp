#pragma once

#include "ownref/backends/process.hpp"
#include "ownref/driver/pipeline.hpp"
#include "ownref/frontend/desugar.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <sys/stat.h>

namespace test_support {

inline std::string corpus(const std::string& name) {
  return std::string(OWNREF_CORPUS_DIR) + "/" + name + ".imp";
}

inline ownref::Program load(const std::string& name) {
  return ownref::frontend::load_program(ownref::driver::read_file(corpus(name)));
}

inline bool have_z3() { return !ownref::backends::find_executable("z3").empty(); }

// A scratch directory removed on destruction.
class ScratchDir {
public:
  ScratchDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "ownref-test-XXXXXX").string();
    path_ = mkdtemp(tmpl.data());
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }

  std::string write(const std::string& name, const std::string& text, bool executable = false) {
    std::string p = path_ + "/" + name;
    std::ofstream(p) << text;
    if (executable) chmod(p.c_str(), 0755);
    return p;
  }

  // Shell stub: sleeps, then prints a verdict. `trap` lets it ignore SIGTERM.
  std::string stub(const std::string& name, double sleep_s, const std::string& out,
                   bool ignore_term = false, int exit_code = 0) {
    std::string body = "#!/bin/sh\n";
    if (ignore_term) body += "trap '' TERM\n";
    body += "sleep " + std::to_string(sleep_s) + "\n";
    if (!out.empty()) body += "printf '" + out + "'\n";
    body += "exit " + std::to_string(exit_code) + "\n";
    return write(name, body, true);
  }

private:
  std::string path_;
};

} // namespace test_support

#include <random>
#include <vector>

namespace test_support {

// Random closed programs in core-shaped surface syntax. Names repeat on
// purpose so shadowing is exercised.
class ProgramGen {
public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::string out;
    bool with_fn = coin(2);
    if (with_fn) out += "f(a, r) { r := a; let z = *r in z }\n";
    Scope s;
    out += block(s, 0, with_fn);
    return out;
  }

private:
  struct Scope {
    std::vector<std::string> ints, refs;
  };
  std::mt19937_64 rng_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int n) { return pick(n) == 0; }
  std::string name(const char* base) { return std::string(base) + std::to_string(pick(4)); }
  template <class V> const std::string& any(const V& v) { return v[static_cast<std::size_t>(pick(static_cast<int>(v.size())))]; }

  static void bind(std::vector<std::string>& v, std::vector<std::string>& other, const std::string& x) {
    std::erase(v, x);
    std::erase(other, x);
    v.push_back(x);
  }

  std::string block(Scope s, int depth, bool with_fn) {
    std::string out;
    int len = 2 + pick(6);
    for (int i = 0; i < len; ++i) {
      int k = pick(10);
      if (s.ints.empty() || k == 0) {
        std::string x = name("i");
        out += "let " + x + " = " + std::to_string(pick(21) - 10) + " in\n";
        bind(s.ints, s.refs, x);
      } else if (k == 1) {
        std::string x = name("r");
        out += "let " + x + " = mkref " + any(s.ints) + " in\n";
        bind(s.refs, s.ints, x);
      } else if (k == 2 && !s.refs.empty()) {
        std::string x = name("i");
        out += "let " + x + " = *" + any(s.refs) + " in\n";
        bind(s.ints, s.refs, x);
      } else if (k == 3 && !s.refs.empty()) {
        out += any(s.refs) + " := " + any(s.ints) + ";\n";
      } else if (k == 4) {
        std::string x = name("i");
        const char* ops[] = {"+", "-", "<", "="};
        out += "let " + x + " = " + any(s.ints) + " " + ops[pick(4)] + " " + any(s.ints) + " in\n";
        bind(s.ints, s.refs, x);
      } else if (k == 5 && !s.refs.empty()) {
        std::string x = name("r");
        out += "let " + x + " = " + any(s.refs) + " in\n";
        bind(s.refs, s.ints, x);
        if (coin(2)) out += "alias(" + x + " = " + any(s.refs) + ");\n";
      } else if (k == 6) {
        const std::string& a = any(s.ints);
        out += "assert(" + a + " = " + a + " || " + a + " < 0);\n";
      } else if (k == 7 && with_fn && !s.refs.empty()) {
        std::string x = name("i");
        out += "let " + x + " = f(" + any(s.ints) + ", " + any(s.refs) + ") in\n";
        bind(s.ints, s.refs, x);
      } else if (k == 8 && depth < 2) {
        out += "ifz " + any(s.ints) + " then {\n" + block(s, depth + 1, with_fn) + "} else {\n" +
               block(s, depth + 1, with_fn) + "};\n";
      } else {
        std::string x = name("i");
        out += "let " + x + " = _ in\n";
        bind(s.ints, s.refs, x);
      }
    }
    return out + any(s.ints) + "\n";
  }
};

} // namespace test_support
