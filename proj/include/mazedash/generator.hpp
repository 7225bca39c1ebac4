#pragma once

#include <cstdint>
#include <stdexcept>

#include "mazedash/grid.hpp"

namespace mazedash {

struct GenConfig {
    int rows = 0;
    int cols = 0;
    int target_obstacles = 0;  // best-effort, steers turn frequency
    std::uint64_t seed = 0;
    int max_retries = 100;
};

struct GeneratedInstance {
    Puzzle puzzle;
    std::vector<Direction> witness;  // the carving walk, one move per segment
    int actual_obstacles = 0;
};

struct GenerationExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carves a random wall-hugging walk over an empty grid. Whenever a segment
// stops short of its maximal run (which happens with a small budget-steered
// probability), the straight-ahead cell gets an obstacle (the blocker that
// "explains" the turn), and every never-visited cell is filled in as an
// obstacle at the end. The walk itself is therefore a valid slide solution,
// kept as the witness, and the instance is re-validated with the
// backtracking solver.
GeneratedInstance generate_puzzle(const GenConfig& config);

// True iff the witness replays to Valid and backtracking solves the puzzle.
bool validate_generated(const GeneratedInstance& instance);

}  // namespace mazedash
