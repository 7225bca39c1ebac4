#include "mazedash/mcts.hpp"

#include <cassert>
#include <chrono>
#include <cmath>

namespace mazedash {

MctsEngine::MctsEngine(const Puzzle& puzzle, const MctsConfig& config)
    : config_(config),
      scratch_(puzzle, &meter_),
      rng_(config.seed),
      nodes_(&meter_),
      path_(&meter_),
      path_tokens_(&meter_),
      rollout_tokens_(&meter_) {
    path_.reserve(puzzle.free_count() + 1);
    path_tokens_.reserve(puzzle.free_count() + 1);
    rollout_tokens_.reserve(puzzle.free_count() + 1);
    nodes_.push_back(MctsNode{});
    if (scratch_.is_complete()) {
        // One free cell: the empty move sequence already covers everything.
        verdict_ = SolveStatus::Solved;
    }
}

void MctsEngine::capture_solution() {
    auto moves = scratch_.moves();
    solution_.assign(moves.begin(), moves.end());
    verdict_ = SolveStatus::Solved;
}

int MctsEngine::select() {
    path_.clear();
    path_tokens_.clear();
    int cur = 0;
    path_.push_back(cur);
    while (nodes_[cur].expanded) {
        const MctsNode& parent = nodes_[cur];
        int pick = -1;
        double best_score = 0.0;
        for (int i = 0; i < parent.child_count; ++i) {
            const int ci = parent.first_child + i;
            const MctsNode& child = nodes_[ci];
            if (child.blocked) continue;
            if (!child.expanded) {
                // Unexpanded children come first; creation order is the
                // canonical tie-break.
                pick = ci;
                break;
            }
            const double score = uct_score(child, parent.visits, config_.exploration_c);
            if (pick < 0 || score > best_score) {
                pick = ci;
                best_score = score;
            }
        }
        // An expanded, non-blocked node always has a non-blocked child:
        // blocking only happens during backpropagation, which re-checks every
        // ancestor on the same ascent.
        assert(pick >= 0);
        if (pick < 0) {
            nodes_[cur].blocked = true;
            return -1;
        }
        path_tokens_.push_back(scratch_.apply_move(nodes_[pick].move));
        path_.push_back(pick);
        cur = pick;
    }
    return cur;
}

void MctsEngine::expand(int leaf) {
    ++expansions_;
    MoveList legal = scratch_.legal_moves();
    MctsNode& node = nodes_[leaf];
    node.expanded = true;
    if (legal.empty()) {
        node.blocked = true;  // failed terminal; completeness is handled by callers
        return;
    }
    const int first = static_cast<int>(nodes_.size());
    int created = 0;
    for (Direction d : legal) {
        UndoToken token = scratch_.apply_move(d);
        MctsNode child;
        child.parent = leaf;
        child.move = d;
        if (scratch_.is_complete()) {
            child.best_reward = 1.0;
            capture_solution();
            scratch_.undo_move(token);
            nodes_.push_back(child);
            ++created;
            break;
        }
        child.blocked = scratch_.is_deadlock();  // pre-blocked failed terminal
        scratch_.undo_move(token);
        nodes_.push_back(child);
        ++created;
    }
    nodes_[leaf].first_child = first;
    nodes_[leaf].child_count = static_cast<std::uint8_t>(created);
}

RolloutResult random_rollout(SlideState& scratch, Rng& rng, TrackedVec<UndoToken>& tokens,
                             std::vector<Direction>* solution_out) {
    tokens.clear();
    RolloutResult result;
    for (;;) {
        if (scratch.is_complete()) {
            result.reward = 1.0;
            result.complete = true;
            if (solution_out) {
                auto moves = scratch.moves();
                solution_out->assign(moves.begin(), moves.end());
            }
            break;
        }
        const MoveList legal = scratch.legal_moves();
        if (legal.empty()) {
            result.reward = static_cast<double>(scratch.visited_count()) /
                            static_cast<double>(scratch.puzzle().free_count());
            break;
        }
        const UndoToken token = scratch.apply_move(legal[rng.below_int(legal.size())]);
        result.cells_traversed += static_cast<std::uint64_t>(token.length);
        tokens.push_back(token);
    }
    while (!tokens.empty()) {
        scratch.undo_move(tokens.back());
        tokens.pop_back();
    }
    return result;
}

double MctsEngine::simulate() {
    const RolloutResult r = random_rollout(scratch_, rng_, rollout_tokens_, &solution_);
    rollout_steps_ += r.cells_traversed;
    if (r.complete) verdict_ = SolveStatus::Solved;
    return r.reward;
}

void MctsEngine::backpropagate(double reward) {
    for (std::size_t i = path_.size(); i-- > 0;) {
        MctsNode& node = nodes_[path_[i]];
        node.visits += 1;
        if (reward > node.best_reward) node.best_reward = reward;
        if (node.expanded && node.child_count > 0 && !node.blocked) {
            bool all_blocked = true;
            for (int k = 0; k < node.child_count; ++k) {
                if (!nodes_[node.first_child + k].blocked) {
                    all_blocked = false;
                    break;
                }
            }
            if (all_blocked) node.blocked = true;
        }
        if (i > 0) {
            scratch_.undo_move(path_tokens_[i - 1]);
        }
    }
    path_tokens_.clear();
}

void MctsEngine::unwind_descent() {
    for (std::size_t i = path_tokens_.size(); i-- > 0;) scratch_.undo_move(path_tokens_[i]);
    path_tokens_.clear();
}

bool MctsEngine::step() {
    if (verdict_) return true;
    if (nodes_[0].blocked) {
        verdict_ = SolveStatus::Unsolvable;
        return true;
    }
    ++iterations_;

    const int leaf = select();
    if (leaf < 0) {
        // Defensive dead-end: propagate blocking up the partial path.
        unwind_descent();
        for (std::size_t i = path_.size(); i-- > 0;) {
            MctsNode& node = nodes_[path_[i]];
            if (node.expanded && node.child_count > 0 && !node.blocked) {
                bool all_blocked = true;
                for (int k = 0; k < node.child_count; ++k)
                    if (!nodes_[node.first_child + k].blocked) all_blocked = false;
                if (all_blocked) node.blocked = true;
            }
        }
        if (nodes_[0].blocked) {
            verdict_ = SolveStatus::Unsolvable;
            return true;
        }
        return false;
    }
    expand(leaf);
    if (verdict_) {
        unwind_descent();
        return true;
    }
    const double reward = simulate();
    if (verdict_) {
        unwind_descent();
        return true;
    }
    backpropagate(reward);
    if (nodes_[0].blocked) {
        verdict_ = SolveStatus::Unsolvable;
        return true;
    }
    return false;
}

SolveResult MctsEngine::run() {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const auto deadline = config_.timeout_ms
                              ? std::optional(t0 + std::chrono::milliseconds(*config_.timeout_ms))
                              : std::nullopt;

    while (!verdict_) {
        if (iterations_ >= config_.max_iterations) {
            verdict_ = SolveStatus::LimitExceeded;
            break;
        }
        if (deadline && (iterations_ & 0x3F) == 0 && Clock::now() >= *deadline) {
            verdict_ = SolveStatus::LimitExceeded;
            break;
        }
        step();
    }

    SolveResult result;
    result.status = *verdict_;
    if (result.status == SolveStatus::Solved) result.moves = solution_;
    result.nodes_expanded = expansions_;
    result.rollout_steps = rollout_steps_;
    result.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    result.peak_tracked_bytes = static_cast<std::uint64_t>(meter_.peak());
    assert(result.status != SolveStatus::Solved ||
           verify_solution(scratch_.puzzle(), result.moves).valid());
    return result;
}

SolveResult solve_mcts(const Puzzle& puzzle, const MctsConfig& config) {
    MctsEngine engine(puzzle, config);
    return engine.run();
}

}  // namespace mazedash
