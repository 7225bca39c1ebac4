#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mazedash/grid.hpp"

namespace mazedash {

enum class SolveStatus {
    Solved,
    Unsolvable,
    LimitExceeded,
    Error,  // external-solver plumbing failures only; never produced by the
            // built-in solvers
};

const char* to_string(SolveStatus status);
std::optional<SolveStatus> solve_status_from_string(std::string_view name);

struct SearchLimits {
    std::optional<std::uint64_t> max_nodes;  // absent = unbounded
    std::optional<std::int64_t> timeout_ms;  // absent = unbounded
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsolvable;
    std::vector<Direction> moves;  // populated when Solved (may be empty on a
                                   // one-cell puzzle)
    std::uint64_t nodes_expanded = 0;
    std::int64_t elapsed_ms = 0;
    std::uint64_t peak_tracked_bytes = 0;
    std::uint64_t rollout_steps = 0;  // 0 for non-MCTS solvers
    std::string detail;               // human-readable note (external failures)
};

}  // namespace mazedash
