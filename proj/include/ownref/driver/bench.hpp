#pragma once

#include "ownref/driver/pipeline.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ownref::driver {

struct BenchRow {
  std::string name;
  std::string expected;      // verified | rejected | (missing)
  std::string got;           // verified | rejected | unknown | error
  double seconds = 0;
  int annotations = 0;
  bool ok = false;
  std::string detail;
};

// `// EXPECT: verified|rejected` from the leading comment lines.
std::optional<std::string> expectation(const std::string& source);

std::vector<BenchRow> bench(const std::string& corpus_dir, const VerifyConfig& cfg);

void print_table(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace ownref::driver
