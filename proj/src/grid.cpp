#include "mazedash/grid.hpp"

#include <algorithm>

namespace mazedash {

std::optional<Direction> direction_from_char(char c) {
    switch (c) {
        case 'U': return Direction::Up;
        case 'R': return Direction::Right;
        case 'D': return Direction::Down;
        case 'L': return Direction::Left;
        default: return std::nullopt;
    }
}

std::string moves_to_string(std::span<const Direction> moves) {
    std::string out;
    out.reserve(moves.size());
    for (Direction d : moves) out.push_back(direction_char(d));
    return out;
}

std::vector<Direction> moves_from_string(std::string_view text) {
    std::vector<Direction> out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto d = direction_from_char(text[i]);
        if (!d) {
            throw ParseError(ParseError::Kind::InvalidCharacter, 1, static_cast<int>(i) + 1,
                             std::string("invalid move character '") + text[i] + "'");
        }
        out.push_back(*d);
    }
    return out;
}

Puzzle::Puzzle(int rows, int cols, const std::vector<Coord>& obstacles, Coord start)
    : rows_(rows), cols_(cols), start_(start) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("puzzle dimensions must be positive");
    cell_.assign(static_cast<std::size_t>(rows) * cols, 0);
    for (Coord o : obstacles) {
        if (!in_bounds(o)) throw std::invalid_argument("obstacle out of bounds");
        cell_[index_of(o)] = 1;
    }
    if (!in_bounds(start)) throw std::invalid_argument("start out of bounds");
    if (cell_[index_of(start)]) throw std::invalid_argument("start on an obstacle");
    free_count_ = static_cast<int>(std::count(cell_.begin(), cell_.end(), 0));
}

Puzzle Puzzle::parse(std::string_view text) {
    std::vector<std::string_view> rows;
    std::vector<int> row_lines;  // original 1-based line numbers, for errors
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        // tolerate CRLF and trailing whitespace
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);
        if (!line.empty() && line.front() != ';') {
            rows.push_back(line);
            row_lines.push_back(line_no);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    if (rows.empty()) throw ParseError(ParseError::Kind::NoStart, 0, 0, "empty puzzle, no start cell");

    const std::size_t width = rows[0].size();
    std::vector<Coord> obstacles;
    std::optional<Coord> start;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width) {
            throw ParseError(ParseError::Kind::RaggedRows, row_lines[r], 0,
                             "row length " + std::to_string(rows[r].size()) + " differs from " +
                                 std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
            Coord here{static_cast<int>(r), static_cast<int>(c)};
            switch (rows[r][c]) {
                case '.': break;
                case '#': obstacles.push_back(here); break;
                case 'S':
                    if (start) {
                        throw ParseError(ParseError::Kind::MultipleStart, row_lines[r],
                                         static_cast<int>(c) + 1, "more than one start cell");
                    }
                    start = here;
                    break;
                default:
                    throw ParseError(ParseError::Kind::InvalidCharacter, row_lines[r],
                                     static_cast<int>(c) + 1,
                                     std::string("invalid character '") + rows[r][c] + "'");
            }
        }
    }
    if (!start) throw ParseError(ParseError::Kind::NoStart, 0, 0, "no start cell");
    return Puzzle(static_cast<int>(rows.size()), static_cast<int>(width), obstacles, *start);
}

std::string Puzzle::serialize() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(rows_) * (cols_ + 1));
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            Coord here{r, c};
            out.push_back(here == start_ ? 'S' : (is_obstacle(here) ? '#' : '.'));
        }
        out.push_back('\n');
    }
    return out;
}

SlideState::SlideState(const Puzzle& puzzle, MemoryMeter* meter)
    : puzzle_(&puzzle),
      meter_(meter),
      visited_(meter),
      moves_(meter),
      undo_(meter),
      agent_(puzzle.start()),
      visited_count_(1) {
    visited_.resize(static_cast<std::size_t>(puzzle.rows()) * puzzle.cols(), 0);
    visited_[puzzle.index_of(agent_)] = 1;
    // A solution has at most free_count - 1 slides; reserve once so the
    // tracked footprint is stable over the whole search.
    moves_.reserve(puzzle.free_count());
    undo_.reserve(puzzle.free_count());
}

std::optional<Slide> SlideState::slide_destination(Direction d) const {
    const int dr = row_delta(d), dc = col_delta(d);
    int r = agent_.row, c = agent_.col;
    int length = 0;
    for (;;) {
        const int nr = r + dr, nc = c + dc;
        Coord next{nr, nc};
        if (!puzzle_->in_bounds(next) || puzzle_->is_obstacle(next) ||
            visited_[puzzle_->index_of(next)])
            break;
        r = nr;
        c = nc;
        ++length;
    }
    if (length == 0) return std::nullopt;
    return Slide{Coord{r, c}, length};
}

MoveList SlideState::legal_moves() const {
    MoveList out;
    for (Direction d : kDirections) {
        // A single-cell probe is enough: the slide exists iff the first step
        // is open.
        Coord next{agent_.row + row_delta(d), agent_.col + col_delta(d)};
        if (puzzle_->in_bounds(next) && !puzzle_->is_obstacle(next) &&
            !visited_[puzzle_->index_of(next)])
            out.add(d);
    }
    return out;
}

UndoToken SlideState::apply_move(Direction d) {
    auto slide = slide_destination(d);
    if (!slide) throw IllegalMoveError(static_cast<int>(moves_.size()));
    const int dr = row_delta(d), dc = col_delta(d);
    int r = agent_.row, c = agent_.col;
    for (int i = 0; i < slide->length; ++i) {
        r += dr;
        c += dc;
        visited_[r * puzzle_->cols() + c] = 1;
    }
    agent_ = slide->stop;
    visited_count_ += slide->length;
    moves_.push_back(d);
    UndoToken token{d, slide->length};
    undo_.push_back(token);
    return token;
}

void SlideState::undo_move(const UndoToken& token) {
    if (undo_.empty() || !(undo_.back() == token)) throw UndoOrderViolation();
    const int dr = row_delta(token.dir), dc = col_delta(token.dir);
    int r = agent_.row, c = agent_.col;
    for (int i = 0; i < token.length; ++i) {
        visited_[r * puzzle_->cols() + c] = 0;
        r -= dr;
        c -= dc;
    }
    agent_ = Coord{r, c};
    visited_count_ -= token.length;
    moves_.pop_back();
    undo_.pop_back();
}

bool SlideState::same_state(const SlideState& other) const {
    return visited_count_ == other.visited_count_ && agent_ == other.agent_ &&
           visited_.raw() == other.visited_.raw() && moves_.raw() == other.moves_.raw();
}

std::string VerifyResult::to_string() const {
    switch (outcome) {
        case Outcome::Valid: return "Valid";
        case Outcome::IllegalMove: return "IllegalMove(" + std::to_string(index) + ")";
        case Outcome::IncompleteCoverage:
            return "IncompleteCoverage(" + std::to_string(missing) + ")";
    }
    return {};
}

VerifyResult verify_solution(const Puzzle& puzzle, std::span<const Direction> moves) {
    SlideState state(puzzle);
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (!state.slide_destination(moves[i]))
            return {VerifyResult::Outcome::IllegalMove, static_cast<int>(i), 0};
        state.apply_move(moves[i]);
    }
    if (!state.is_complete()) {
        return {VerifyResult::Outcome::IncompleteCoverage, 0,
                puzzle.free_count() - state.visited_count()};
    }
    return {VerifyResult::Outcome::Valid, 0, 0};
}

std::vector<Coord> expand_to_cells(const Puzzle& puzzle, std::span<const Direction> moves) {
    SlideState state(puzzle);
    std::vector<Coord> cells;
    cells.reserve(puzzle.free_count());
    cells.push_back(puzzle.start());
    for (std::size_t i = 0; i < moves.size(); ++i) {
        auto slide = state.slide_destination(moves[i]);
        if (!slide) throw IllegalMoveError(static_cast<int>(i));
        Coord at = state.agent();
        const int dr = row_delta(moves[i]), dc = col_delta(moves[i]);
        for (int k = 0; k < slide->length; ++k) {
            at.row += dr;
            at.col += dc;
            cells.push_back(at);
        }
        state.apply_move(moves[i]);
    }
    return cells;
}

}  // namespace mazedash
