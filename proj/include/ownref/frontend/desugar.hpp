#pragma once

#include "ownref/frontend/ast.hpp"

#include <string>

namespace ownref::frontend {

// Produces `<base>$<n>` names, with n above every `$n` suffix already in use.
class NameSupply {
public:
  void reserve(const std::string& name);
  std::string fresh(const std::string& hint);

private:
  unsigned long next_ = 1;
};

Program desugar(const surface::Program& sp);

// parse + desugar + check_program.
Program load_program(std::string_view source);

} // namespace ownref::frontend
