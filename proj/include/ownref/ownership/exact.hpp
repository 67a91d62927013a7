#pragma once

#include "ownref/ownership/constraints.hpp"

#include <optional>
#include <set>

namespace ownref::ownership::exact {

// Linear relaxation: all constraints but ZeroImplies, variables in [0, 1]
// (or [0, 0] when listed in `zero`). Maximizes sum of `objective` variables.
// Returns nullopt when infeasible.
std::optional<Assignment> optimize(const System& s, const std::set<int>& zero,
                                   const std::set<int>& objective);

// A satisfying assignment whose set of positive variables is maximal (and in
// fact the unique maximum, as the solution set is convex). nullopt if infeasible.
std::optional<Assignment> max_support(const System& s);

bool feasible(const System& s);

} // namespace ownref::ownership::exact
