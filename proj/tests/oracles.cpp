#include "oracles.hpp"

#include <algorithm>

using namespace mazedash;

namespace oracle {

namespace {

struct CellDfs {
    const Puzzle& puzzle;
    std::vector<std::uint8_t> used;
    CellPath path;
    std::set<CellPath>* out;  // null for existence checks
    bool found = false;

    explicit CellDfs(const Puzzle& p, std::set<CellPath>* sink)
        : puzzle(p), used(static_cast<std::size_t>(p.rows()) * p.cols(), 0), out(sink) {
        path.reserve(p.free_count());
    }

    void visit(Coord c) {
        used[puzzle.index_of(c)] = 1;
        path.push_back(c);
        step();
        path.pop_back();
        used[puzzle.index_of(c)] = 0;
    }

    void step() {
        if (found && !out) return;
        if (static_cast<int>(path.size()) == puzzle.free_count()) {
            found = true;
            if (out) out->insert(path);
            return;
        }
        const Coord cur = path.back();
        if (path.size() >= 2) {
            const Coord prev = path[path.size() - 2];
            const Coord ahead{2 * cur.row - prev.row, 2 * cur.col - prev.col};
            if (puzzle.is_free(ahead) && !used[puzzle.index_of(ahead)]) {
                visit(ahead);  // forced straight
                return;
            }
        }
        for (Direction d : kDirections) {
            const Coord next{cur.row + row_delta(d), cur.col + col_delta(d)};
            if (puzzle.is_free(next) && !used[puzzle.index_of(next)]) visit(next);
        }
    }
};

void move_dfs(SlideState& state, std::vector<MoveSeq>& out) {
    if (state.is_complete()) {
        auto moves = state.moves();
        out.emplace_back(moves.begin(), moves.end());
        return;
    }
    for (Direction d : state.legal_moves()) {
        const UndoToken token = state.apply_move(d);
        move_dfs(state, out);
        state.undo_move(token);
    }
}

}  // namespace

std::set<CellPath> enumerate_cell_paths(const Puzzle& puzzle) {
    std::set<CellPath> out;
    CellDfs dfs(puzzle, &out);
    dfs.visit(puzzle.start());
    return out;
}

bool cell_model_solvable(const Puzzle& puzzle) {
    CellDfs dfs(puzzle, nullptr);
    dfs.visit(puzzle.start());
    return dfs.found;
}

std::vector<MoveSeq> enumerate_move_solutions(const Puzzle& puzzle) {
    std::vector<MoveSeq> out;
    SlideState state(puzzle);
    move_dfs(state, out);
    return out;
}

std::vector<Puzzle> puzzles_with_obstacle_subsets(int rows, int cols, int max_obstacles) {
    std::vector<Puzzle> out;
    const int n = rows * cols;
    std::vector<Coord> cells;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) cells.push_back({r, c});

    std::vector<int> pick;
    auto emit = [&] {
        std::vector<Coord> obstacles;
        for (int i : pick) obstacles.push_back(cells[i]);
        for (int s = 0; s < n; ++s) {
            const bool blocked =
                std::find(pick.begin(), pick.end(), s) != pick.end();
            if (!blocked) out.emplace_back(rows, cols, obstacles, cells[s]);
        }
    };
    auto subsets = [&](auto&& self, int from, int remaining) -> void {
        if (remaining == 0) {
            emit();
            return;
        }
        for (int i = from; i < n; ++i) {
            pick.push_back(i);
            self(self, i + 1, remaining - 1);
            pick.pop_back();
        }
    };
    for (int k = 0; k <= max_obstacles && k < n; ++k) subsets(subsets, 0, k);
    return out;
}

std::vector<Puzzle> all_grids_up_to_cells(int max_cells) {
    std::vector<Puzzle> out;
    for (int rows = 1; rows <= max_cells; ++rows) {
        for (int cols = 1; rows * cols <= max_cells; ++cols) {
            const int n = rows * cols;
            auto with = puzzles_with_obstacle_subsets(rows, cols, n - 1);
            out.insert(out.end(), with.begin(), with.end());
        }
    }
    return out;
}

}  // namespace oracle
