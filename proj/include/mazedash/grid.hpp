#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mazedash/memory.hpp"

namespace mazedash {

// Canonical order U < R < D < L. This order is the deterministic tie-break
// used everywhere: move enumeration, search child ordering, reports.
enum class Direction : std::uint8_t { Up = 0, Right = 1, Down = 2, Left = 3 };

constexpr std::array<Direction, 4> kDirections = {Direction::Up, Direction::Right,
                                                  Direction::Down, Direction::Left};

constexpr int row_delta(Direction d) {
    constexpr int dr[4] = {-1, 0, 1, 0};
    return dr[static_cast<int>(d)];
}
constexpr int col_delta(Direction d) {
    constexpr int dc[4] = {0, 1, 0, -1};
    return dc[static_cast<int>(d)];
}
constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}
constexpr char direction_char(Direction d) {
    constexpr char c[4] = {'U', 'R', 'D', 'L'};
    return c[static_cast<int>(d)];
}
std::optional<Direction> direction_from_char(char c);

std::string moves_to_string(std::span<const Direction> moves);
// Throws ParseError (InvalidCharacter) on anything outside "URDL".
std::vector<Direction> moves_from_string(std::string_view text);

struct Coord {
    int row = 0;
    int col = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
    friend auto operator<=>(const Coord&, const Coord&) = default;
};

struct ParseError : std::runtime_error {
    enum class Kind { RaggedRows, NoStart, MultipleStart, InvalidCharacter };
    ParseError(Kind k, int line, int column, const std::string& msg)
        : std::runtime_error(msg), kind(k), line(line), column(column) {}
    Kind kind;
    int line;    // 1-based input line, 0 when not applicable
    int column;  // 1-based column, 0 when not applicable
};

struct IllegalMoveError : std::logic_error {
    explicit IllegalMoveError(int index)
        : std::logic_error("illegal move at index " + std::to_string(index)), index(index) {}
    int index;  // position in the offending move sequence, -1 for a single move
};

struct UndoOrderViolation : std::logic_error {
    UndoOrderViolation() : std::logic_error("undo token is not the most recent move") {}
};

// Immutable grid definition: dimensions, obstacle set, start cell.
class Puzzle {
public:
    Puzzle(int rows, int cols, const std::vector<Coord>& obstacles, Coord start);

    // Text format: rows of '.' (free), '#' (obstacle), 'S' (start, exactly
    // one); ';' starts a comment line; all rows equal length.
    static Puzzle parse(std::string_view text);
    // Canonical form: no comments, every row newline-terminated.
    std::string serialize() const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Coord start() const { return start_; }
    int free_count() const { return free_count_; }
    int obstacle_count() const { return rows_ * cols_ - free_count_; }

    bool in_bounds(Coord c) const {
        return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
    }
    bool is_obstacle(Coord c) const { return cell_[index_of(c)] != 0; }
    bool is_free(Coord c) const { return in_bounds(c) && !is_obstacle(c); }
    int index_of(Coord c) const { return c.row * cols_ + c.col; }

    friend bool operator==(const Puzzle& a, const Puzzle& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.start_ == b.start_ &&
               a.cell_ == b.cell_;
    }

private:
    int rows_;
    int cols_;
    Coord start_;
    int free_count_;
    std::vector<std::uint8_t> cell_;  // 1 = obstacle
};

struct UndoToken {
    Direction dir;
    int length;  // >= 1; undoing un-visits exactly this many cells
    friend bool operator==(const UndoToken&, const UndoToken&) = default;
};

struct Slide {
    Coord stop;
    int length;
};

// Fixed-capacity move list; slide states never have more than 4 legal moves.
struct MoveList {
    std::array<Direction, 4> dirs;
    int count = 0;
    void add(Direction d) { dirs[count++] = d; }
    bool contains(Direction d) const {
        for (int i = 0; i < count; ++i)
            if (dirs[i] == d) return true;
        return false;
    }
    const Direction* begin() const { return dirs.data(); }
    const Direction* end() const { return dirs.data() + count; }
    Direction operator[](int i) const { return dirs[i]; }
    int size() const { return count; }
    bool empty() const { return count == 0; }
};

// Mutable exploration state over a Puzzle: visited mask, agent position,
// move history and the undo stack that makes search backtracking and the
// shared-scratch rollout cheap. Single-owner; the Puzzle must outlive it.
class SlideState {
public:
    explicit SlideState(const Puzzle& puzzle, MemoryMeter* meter = nullptr);

    const Puzzle& puzzle() const { return *puzzle_; }
    Coord agent() const { return agent_; }
    int visited_count() const { return visited_count_; }
    bool visited(Coord c) const { return visited_[puzzle_->index_of(c)] != 0; }
    std::span<const Direction> moves() const { return {moves_.data(), moves_.size()}; }
    std::size_t depth() const { return moves_.size(); }

    // Farthest reachable cell in direction d: every traversed cell in
    // bounds, non-obstacle and unvisited. Empty when the first step is
    // already blocked.
    std::optional<Slide> slide_destination(Direction d) const;

    // All directions with a non-empty slide, in canonical order. At most 2
    // after the first move (arrival direction and its reverse are blocked).
    MoveList legal_moves() const;

    // Marks the traversed cells visited, moves the agent, records the move.
    // Throws IllegalMoveError when the slide is blocked.
    UndoToken apply_move(Direction d);

    // Restores the state before the matching apply_move. The token must be
    // the most recent un-popped one.
    void undo_move(const UndoToken& token);

    bool is_complete() const { return visited_count_ == puzzle_->free_count(); }
    bool is_deadlock() const { return !is_complete() && legal_moves().empty(); }

    // Structural equality over (mask, agent, visited_count, moves).
    bool same_state(const SlideState& other) const;

private:
    const Puzzle* puzzle_;
    MemoryMeter* meter_;
    TrackedVec<std::uint8_t> visited_;
    TrackedVec<Direction> moves_;
    TrackedVec<UndoToken> undo_;
    Coord agent_;
    int visited_count_;
};

struct VerifyResult {
    enum class Outcome { Valid, IllegalMove, IncompleteCoverage };
    Outcome outcome = Outcome::Valid;
    int index = 0;    // first offending move (IllegalMove)
    int missing = 0;  // unvisited free cells after replay (IncompleteCoverage)

    bool valid() const { return outcome == Outcome::Valid; }
    std::string to_string() const;
    friend bool operator==(const VerifyResult&, const VerifyResult&) = default;
};

// Replays moves from a fresh state. Slides always run to their stop cell, so
// any replayable sequence automatically satisfies the forced-straight rule;
// only legality and coverage need checking.
VerifyResult verify_solution(const Puzzle& puzzle, std::span<const Direction> moves);

// Materializes the per-cell path (start first). Throws IllegalMoveError on
// an unreplayable sequence.
std::vector<Coord> expand_to_cells(const Puzzle& puzzle, std::span<const Direction> moves);

}  // namespace mazedash
