#include "mazedash/generator.hpp"

#include "mazedash/backtrack.hpp"
#include "mazedash/rng.hpp"

namespace mazedash {

namespace {

struct WalkResult {
    Puzzle puzzle;
    std::vector<Direction> witness;
    int obstacles;
};

// Probability (percent) that a segment stops one cell short of its maximal
// run while the walk is still below its obstacle budget. Each short stop
// plants one obstacle; higher rates fragment the grid and inflate the final
// count through stranded cells, so the rate is kept low.
constexpr int kShortStopPercent = 10;

WalkResult carve(int rows, int cols, int target_obstacles, Rng& rng) {
    const int total = rows * cols;
    std::vector<std::uint8_t> visited(total, 0);
    std::vector<std::uint8_t> obstacle(total, 0);
    auto idx = [cols](int r, int c) { return r * cols + c; };
    auto open = [&](int r, int c) {
        return r >= 0 && r < rows && c >= 0 && c < cols && !visited[idx(r, c)] &&
               !obstacle[idx(r, c)];
    };

    const int start_r = rng.below_int(rows);
    const int start_c = rng.below_int(cols);
    visited[idx(start_r, start_c)] = 1;

    int r = start_r, c = start_c;
    int placed = 0;
    std::vector<Direction> witness;
    std::optional<Direction> current;
    // Turns keep a consistent handedness (wall-hugging walk) and flip when
    // the preferred side is blocked; this covers far more of the grid than
    // independent random turns, keeping the stranded-cell filler small.
    int hand = rng.below(2) ? 1 : 3;

    for (;;) {
        Direction d;
        if (!current) {
            MoveList candidates;
            for (Direction dd : kDirections)
                if (open(r + row_delta(dd), c + col_delta(dd))) candidates.add(dd);
            if (candidates.empty()) break;
            d = candidates[rng.below_int(candidates.size())];
        } else {
            const auto turned = [&](int h) {
                return static_cast<Direction>((static_cast<int>(*current) + h) % 4);
            };
            if (open(r + row_delta(turned(hand)), c + col_delta(turned(hand)))) {
                d = turned(hand);
            } else if (open(r + row_delta(turned(4 - hand)), c + col_delta(turned(4 - hand)))) {
                hand = 4 - hand;
                d = turned(hand);
            } else {
                break;
            }
        }

        int max_run = 0;
        while (open(r + (max_run + 1) * row_delta(d), c + (max_run + 1) * col_delta(d)))
            ++max_run;
        // Below the obstacle budget an occasional segment stops one cell
        // short, which plants the obstacle that "explains" the turn; at or
        // above the budget every segment runs to its maximum so turns come
        // for free.
        int length = max_run;
        if (placed < target_obstacles && max_run >= 2 &&
            rng.below_int(100) < kShortStopPercent)
            length = max_run - 1;

        for (int i = 0; i < length; ++i) {
            r += row_delta(d);
            c += col_delta(d);
            visited[idx(r, c)] = 1;
        }
        witness.push_back(d);
        current = d;

        if (length < max_run) {
            obstacle[idx(r + row_delta(d), c + col_delta(d))] = 1;
            ++placed;
        }
    }

    // Unreached cells would be uncoverable free cells; fill them in.
    std::vector<Coord> obstacles;
    for (int rr = 0; rr < rows; ++rr)
        for (int cc = 0; cc < cols; ++cc)
            if (!visited[idx(rr, cc)]) obstacles.push_back({rr, cc});
    return {Puzzle(rows, cols, obstacles, {start_r, start_c}), std::move(witness),
            static_cast<int>(obstacles.size())};
}

}  // namespace

GeneratedInstance generate_puzzle(const GenConfig& config) {
    if (config.rows <= 0 || config.cols <= 0)
        throw std::invalid_argument("generator dimensions must be positive");
    if (config.target_obstacles < 0 || config.target_obstacles >= config.rows * config.cols)
        throw std::invalid_argument("target_obstacles must be in [0, rows*cols)");
    if (config.max_retries <= 0) throw std::invalid_argument("max_retries must be positive");

    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        Rng rng(attempt == 0 ? config.seed : derive_seed(config.seed, attempt));
        WalkResult walk = carve(config.rows, config.cols, config.target_obstacles, rng);

        // The walk is a solution by construction; a failure here is a bug,
        // not bad luck.
        if (!verify_solution(walk.puzzle, walk.witness).valid())
            throw std::logic_error("generator produced an invalid witness");

        if (solve_backtrack(walk.puzzle).status == SolveStatus::Solved)
            return {std::move(walk.puzzle), std::move(walk.witness), walk.obstacles};
    }
    throw GenerationExhausted("no solvable instance after " +
                              std::to_string(config.max_retries) + " attempts");
}

bool validate_generated(const GeneratedInstance& instance) {
    return verify_solution(instance.puzzle, instance.witness).valid() &&
           solve_backtrack(instance.puzzle).status == SolveStatus::Solved;
}

}  // namespace mazedash
