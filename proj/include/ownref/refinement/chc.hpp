#pragma once

#include "ownref/ownership/constraints.hpp"
#include "ownref/typing/templates.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ownref::refinement {

struct HornClause {
  std::vector<logic::Formula> body;
  std::optional<logic::Formula> head;   // an atom; nullopt means false
  std::string origin;
};

struct CHCSystem {
  std::vector<typing::PredicateSymbol> predicates;   // those the clauses mention
  std::vector<HornClause> clauses;
};

// Leaf predicates whose enclosing reference has ownership 0 in `solution`.
std::set<int> forced_predicates(const typing::TemplateEnv& env,
                                const ownership::Assignment& solution);

CHCSystem generate_chc(const Program& p, const typing::TemplateEnv& env,
                       const ownership::Assignment& solution);

// SMT-LIB2 HORN script ending in (check-sat). sat means every assertion holds.
std::string emit_smtlib2_horn(const CHCSystem& s);

} // namespace ownref::refinement
