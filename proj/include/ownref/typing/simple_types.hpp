#pragma once

#include "ownref/frontend/ast.hpp"

#include <map>
#include <string>
#include <vector>

namespace ownref::typing {

// int ref^depth
struct SimpleType {
  int depth = 0;

  static SimpleType integer() { return {0}; }
  static SimpleType ref(SimpleType t) { return {t.depth + 1}; }
  bool is_int() const { return depth == 0; }
  SimpleType content() const { return {depth - 1}; }
  bool operator==(const SimpleType&) const = default;
  std::string to_string() const;
};

struct FunctionType {
  std::vector<SimpleType> params;
  SimpleType ret;
};

struct SimpleTypeMap {
  std::map<std::string, SimpleType> vars;
  std::map<std::string, FunctionType> functions;

  const SimpleType& of(const std::string& x) const;
};

SimpleTypeMap infer_simple_types(const Program& p);

} // namespace ownref::typing
