#pragma once

#include "ownref/backends/solver.hpp"
#include "ownref/ownership/constraints.hpp"

#include <set>
#include <string>
#include <vector>

namespace ownref::ownership {

struct Solution {
  enum class Status { Solved, Infeasible, Unknown };
  Status status = Status::Unknown;
  Assignment values;                  // when Solved
  std::vector<std::size_t> core;      // constraint indices, when Infeasible
  int queries = 0;
  std::string detail;
};

// QF_LRA script asserting the system (every constraint named c<i>), plus
// `extra` raw assertions, ending in check-sat.
std::string emit_ownership_smt(const System& s, const std::vector<std::string>& extra = {},
                               bool want_model = false);

// Maximizes the set of positive variables through repeated queries to an
// SMT solver, then re-checks the final assignment exactly.
Solution solve_ownership_smt(const System& s, const backends::SolverSpec& solver);

// Same contract, computed with the internal rational simplex.
Solution solve_ownership_internal(const System& s);

// A subset of constraints that is already infeasible and minimal under deletion.
std::vector<std::size_t> minimize_core(const System& s, std::vector<std::size_t> candidates);

} // namespace ownref::ownership
