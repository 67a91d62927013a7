#include "ownref/driver/bench.hpp"

#include "ownref/logic/error.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace ownref::driver {

namespace fs = std::filesystem;

std::optional<std::string> expectation(const std::string& source) {
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line.compare(start, 2, "//") != 0) break;
    auto at = line.find("EXPECT:");
    if (at == std::string::npos) continue;
    std::istringstream word(line.substr(at + 7));
    std::string w;
    word >> w;
    if (w == "verified" || w == "rejected") return w;
  }
  return std::nullopt;
}

std::vector<BenchRow> bench(const std::string& corpus_dir, const VerifyConfig& cfg) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(corpus_dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".imp") files.push_back(e.path());
  if (ec) throw Error("cannot list " + corpus_dir + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows;
  for (const auto& f : files) {
    BenchRow row;
    row.name = f.stem().string();
    std::string src = read_file(f.string());
    row.expected = expectation(src).value_or("(missing)");
    auto t = std::chrono::steady_clock::now();
    Report r = verify_source(src, cfg);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    row.annotations = r.annotations;
    switch (r.verdict) {
    case Report::Verdict::Verified: row.got = "verified"; break;
    case Report::Verdict::Rejected: row.got = "rejected"; break;
    case Report::Verdict::Unknown: row.got = "unknown"; break;
    case Report::Verdict::ToolError: row.got = "error"; break;
    }
    row.ok = row.got == row.expected;
    row.detail = r.verdict == Report::Verdict::Verified ? "" : r.detail;
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_table(std::ostream& os, const std::vector<BenchRow>& rows) {
  std::size_t w = 4;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-9s  %-9s  %8s  %3s\n", static_cast<int>(w), "name",
                "expected", "got", "time", "ann");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-9s  %-9s  %7.2fs  %3d%s\n", static_cast<int>(w),
                  r.name.c_str(), r.expected.c_str(), r.got.c_str(), r.seconds, r.annotations,
                  r.ok ? "" : "  MISMATCH");
    os << buf;
  }
}

} // namespace ownref::driver
