#pragma once

#include "mazedash/result.hpp"

namespace mazedash {

// Exhaustive depth-first search over slide moves with chronological
// backtracking on a single in-place SlideState. Children are tried in
// canonical direction order, so results are deterministic. This is the
// correctness oracle and the worst-case baseline; it deliberately has no
// pruning beyond the slide rules themselves.
SolveResult solve_backtrack(const Puzzle& puzzle, const SearchLimits& limits = {});

}  // namespace mazedash
