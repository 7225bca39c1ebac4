#include "mazedash/backtrack.hpp"

#include <chrono>

#include "mazedash/memory.hpp"

namespace mazedash {

namespace {

struct Frame {
    MoveList moves;
    int next = 0;
    UndoToken token{Direction::Up, 0};  // move that entered this node; length 0 at root
};

}  // namespace

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Solved: return "solved";
        case SolveStatus::Unsolvable: return "unsolvable";
        case SolveStatus::LimitExceeded: return "limit-exceeded";
        case SolveStatus::Error: return "error";
    }
    return "unknown";
}

std::optional<SolveStatus> solve_status_from_string(std::string_view name) {
    if (name == "solved") return SolveStatus::Solved;
    if (name == "unsolvable") return SolveStatus::Unsolvable;
    if (name == "limit-exceeded") return SolveStatus::LimitExceeded;
    if (name == "error") return SolveStatus::Error;
    return std::nullopt;
}

SolveResult solve_backtrack(const Puzzle& puzzle, const SearchLimits& limits) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const auto deadline =
        limits.timeout_ms ? std::optional(t0 + std::chrono::milliseconds(*limits.timeout_ms))
                          : std::nullopt;

    MemoryMeter meter;
    SlideState state(puzzle, &meter);

    SolveResult result;
    auto finish = [&](SolveStatus status) {
        result.status = status;
        result.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        result.peak_tracked_bytes = static_cast<std::uint64_t>(meter.peak());
        return result;
    };

    if (state.is_complete()) {
        return finish(SolveStatus::Solved);  // one-cell puzzle, empty solution
    }

    // Explicit stack: depth can reach free_count, which would overflow the
    // call stack on large grids.
    TrackedVec<Frame> stack(&meter);
    stack.reserve(static_cast<std::size_t>(puzzle.free_count()) + 1);
    stack.push_back(Frame{state.legal_moves(), 0, {}});

    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next >= top.moves.size()) {
            if (top.token.length > 0) state.undo_move(top.token);
            stack.pop_back();
            continue;
        }
        const Direction d = top.moves[top.next++];
        UndoToken token = state.apply_move(d);
        ++result.nodes_expanded;

        if (state.is_complete()) {
            auto moves = state.moves();
            result.moves.assign(moves.begin(), moves.end());
            return finish(SolveStatus::Solved);
        }
        stack.push_back(Frame{state.legal_moves(), 0, token});

        if (limits.max_nodes && result.nodes_expanded >= *limits.max_nodes)
            return finish(SolveStatus::LimitExceeded);
        if (deadline && (result.nodes_expanded & 0x3FF) == 0 && Clock::now() >= *deadline)
            return finish(SolveStatus::LimitExceeded);
    }
    return finish(SolveStatus::Unsolvable);
}

}  // namespace mazedash
