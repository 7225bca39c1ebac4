#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>

#include "mazedash/memory.hpp"
#include "mazedash/result.hpp"
#include "mazedash/rng.hpp"

namespace mazedash {

struct MctsConfig {
    double exploration_c = std::numbers::sqrt2;
    std::uint64_t max_iterations = std::numeric_limits<std::uint64_t>::max();
    std::optional<std::int64_t> timeout_ms;
    std::uint64_t seed = 0;
};

// Tree nodes hold move + statistics only, never grid state; the per-node
// footprint is a constant independent of the grid size. Children live
// contiguously in the pool (first_child .. first_child + child_count - 1),
// created in canonical direction order.
struct MctsNode {
    std::int32_t parent = -1;
    std::int32_t first_child = -1;
    std::uint8_t child_count = 0;
    Direction move = Direction::Up;  // unused for the root
    bool expanded = false;
    bool blocked = false;  // no descendant can reach full coverage
    std::uint32_t visits = 0;
    double best_reward = 0.0;
};

// Tree-policy score: best observed reward plus the UCT exploration bonus,
// with +1 smoothing in both visit terms so unvisited children need no
// special-case urgency constant.
inline double uct_score(const MctsNode& child, std::uint32_t parent_visits, double c) {
    return child.best_reward +
           c * std::sqrt(std::log(static_cast<double>(parent_visits) + 1.0) /
                         (static_cast<double>(child.visits) + 1.0));
}

struct RolloutResult {
    double reward = 0.0;  // visited / free, in [0, 1]
    std::uint64_t cells_traversed = 0;
    bool complete = false;
};

// Plays uniformly random legal moves until completion or deadlock, scores
// the coverage, then undoes every rollout move. When the rollout completes
// the puzzle, the full move sequence (tree prefix included) is written to
// solution_out before unwinding.
RolloutResult random_rollout(SlideState& scratch, Rng& rng, TrackedVec<UndoToken>& tokens,
                             std::vector<Direction>* solution_out);

// Single-agent MCTS: UCT selection over non-blocked children, one expansion
// per iteration, uniformly random rollouts scored as covered/free, max
// backup. One mutable scratch SlideState is replayed down the tree during
// selection and undone during backpropagation, so the tree itself stores no
// grid state. The engine is exposed (rather than just solve_mcts) so tests
// and the bench harness can inspect tree shape and memory.
class MctsEngine {
public:
    MctsEngine(const Puzzle& puzzle, const MctsConfig& config);

    // Runs one select/expand/simulate/backpropagate iteration. Returns true
    // once a verdict exists (Solved or Unsolvable).
    bool step();

    // Iterates until solved, proven unsolvable, or the budget runs out.
    SolveResult run();

    std::optional<SolveStatus> verdict() const { return verdict_; }
    std::span<const Direction> solution() const { return {solution_.data(), solution_.size()}; }

    std::size_t node_count() const { return nodes_.size(); }
    const MctsNode& node(std::size_t i) const { return nodes_[i]; }
    std::uint64_t iterations() const { return iterations_; }
    std::uint64_t expansions() const { return expansions_; }
    std::uint64_t rollout_steps() const { return rollout_steps_; }
    // Logical bytes of tree nodes; divide by node_count() for the per-node
    // cost, which must not depend on the grid.
    std::uint64_t node_pool_bytes() const { return node_count() * sizeof(MctsNode); }
    const MemoryMeter& meter() const { return meter_; }

private:
    int select();
    void expand(int leaf);
    double simulate();
    void backpropagate(double reward);
    void unwind_descent();
    void capture_solution();

    MctsConfig config_;
    MemoryMeter meter_;
    SlideState scratch_;
    Rng rng_;
    TrackedVec<MctsNode> nodes_;
    TrackedVec<std::int32_t> path_;        // node indices root..leaf of this iteration
    TrackedVec<UndoToken> path_tokens_;    // tokens for the path edges
    TrackedVec<UndoToken> rollout_tokens_;
    std::vector<Direction> solution_;
    std::optional<SolveStatus> verdict_;
    std::uint64_t iterations_ = 0;
    std::uint64_t expansions_ = 0;
    std::uint64_t rollout_steps_ = 0;
};

SolveResult solve_mcts(const Puzzle& puzzle, const MctsConfig& config);

}  // namespace mazedash
