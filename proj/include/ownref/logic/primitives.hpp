#pragma once

#include "ownref/logic/formula.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ownref::prim {

// Every primitive has signature (Int, ..., Int) -> Int.
struct Primitive {
  std::string name;
  int arity = 0;
  bool nondet = false;
  std::function<BigInt(const std::vector<BigInt>&)> eval;
  // Refinement of `result` in terms of the argument terms.
  std::function<logic::Formula(const logic::Term& result, const std::vector<logic::Term>& args)>
      schema;
};

const std::map<std::string, Primitive>& registry();
const Primitive* lookup(const std::string& name);
const Primitive& require(const std::string& name);

} // namespace ownref::prim
