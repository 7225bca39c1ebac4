#include <set>

#include "doctest.h"
#include "mazedash/grid.hpp"
#include "mazedash/rng.hpp"
#include "oracles.hpp"

using namespace mazedash;

namespace {

Puzzle parse(const char* text) { return Puzzle::parse(text); }

std::vector<Direction> moves(const char* s) { return moves_from_string(s); }

}  // namespace

TEST_SUITE_BEGIN("grid");

TEST_CASE("direction basics") {
    CHECK(opposite(Direction::Up) == Direction::Down);
    CHECK(opposite(Direction::Left) == Direction::Right);
    CHECK(row_delta(Direction::Up) == -1);
    CHECK(col_delta(Direction::Right) == 1);
    // canonical order U < R < D < L
    CHECK(static_cast<int>(Direction::Up) < static_cast<int>(Direction::Right));
    CHECK(static_cast<int>(Direction::Right) < static_cast<int>(Direction::Down));
    CHECK(static_cast<int>(Direction::Down) < static_cast<int>(Direction::Left));
    CHECK(moves_to_string(moves("URDL")) == "URDL");
    CHECK_THROWS_AS(moves_from_string("URX"), ParseError);
}

TEST_CASE("parse: corridor") {
    const Puzzle p = parse("S..");
    CHECK(p.rows() == 1);
    CHECK(p.cols() == 3);
    CHECK(p.obstacle_count() == 0);
    CHECK(p.start() == Coord{0, 0});
    CHECK(p.free_count() == 3);
}

TEST_CASE("parse: obstacles and comments") {
    const Puzzle p = parse("; a comment\nS#\n..\n");
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 2);
    CHECK(p.is_obstacle({0, 1}));
    CHECK(p.free_count() == 3);
    CHECK(p.start() == Coord{0, 0});
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("S.\n..\n..."), ParseError);  // ragged
    CHECK_THROWS_AS(parse("..\n..\n"), ParseError);     // no start
    CHECK_THROWS_AS(parse("S.\n.S\n"), ParseError);     // two starts
    CHECK_THROWS_AS(parse("S.\n.X\n"), ParseError);     // bad character
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
        parse("S.\n..\n...");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::RaggedRows);
        CHECK(e.line == 3);
    }
    try {
        parse("S.\n.X\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::InvalidCharacter);
        CHECK(e.line == 2);
        CHECK(e.column == 2);
    }
}

TEST_CASE("serialize: canonical form") {
    CHECK(Puzzle(1, 3, {}, {0, 0}).serialize() == "S..\n");
    CHECK(Puzzle(2, 2, {{0, 1}}, {0, 0}).serialize() == "S#\n..\n");
}

TEST_CASE("parse/serialize round trip tolerates comments and trailing space") {
    const char* messy = "; header\nS.# \n... \t\n; tail\n..#";
    const Puzzle p = parse(messy);
    const std::string canon = p.serialize();
    CHECK(canon == "S.#\n...\n..#\n");
    CHECK(parse(canon.c_str()).serialize() == canon);  // fixpoint
}

TEST_CASE("slide_destination: corridor and blocking") {
    const Puzzle p = parse("S....");
    SlideState s(p);
    auto slide = s.slide_destination(Direction::Right);
    REQUIRE(slide.has_value());
    CHECK(slide->stop == Coord{0, 4});
    CHECK(slide->length == 4);
    CHECK_FALSE(s.slide_destination(Direction::Up).has_value());
    CHECK_FALSE(s.slide_destination(Direction::Left).has_value());
}

TEST_CASE("slide_destination: visited cells block like obstacles") {
    const Puzzle p = parse("S..\n...\n...");
    SlideState s(p);
    s.apply_move(Direction::Right);
    s.apply_move(Direction::Down);
    s.apply_move(Direction::Left);
    CHECK(s.agent() == Coord{2, 0});
    auto up = s.slide_destination(Direction::Up);
    REQUIRE(up.has_value());
    CHECK(up->stop == Coord{1, 0});  // (0,0) is visited
    CHECK(up->length == 1);
}

TEST_CASE("legal_moves: canonical order, fresh corner") {
    const Puzzle p = parse("S..\n...\n...");
    SlideState s(p);
    const MoveList legal = s.legal_moves();
    REQUIRE(legal.size() == 2);
    CHECK(legal[0] == Direction::Right);
    CHECK(legal[1] == Direction::Down);
}

TEST_CASE("legal_moves: after one move only the perpendicular remains") {
    const Puzzle p = parse("S..\n...\n...");
    SlideState s(p);
    s.apply_move(Direction::Right);
    CHECK(s.agent() == Coord{0, 2});
    const MoveList legal = s.legal_moves();
    REQUIRE(legal.size() == 1);
    CHECK(legal[0] == Direction::Down);
}

TEST_CASE("legal_moves: deadlock in mid-start corridor") {
    const Puzzle p = parse(".S.");
    SlideState s(p);
    s.apply_move(Direction::Left);
    CHECK(s.legal_moves().empty());
    CHECK(s.is_deadlock());
    CHECK_FALSE(s.is_complete());
}

TEST_CASE("apply_move: corridor, completion, illegal wall move") {
    const Puzzle p1 = parse("S..");
    SlideState s1(p1);
    s1.apply_move(Direction::Right);
    CHECK(s1.agent() == Coord{0, 2});
    CHECK(s1.visited_count() == 3);
    CHECK(s1.is_complete());

    const Puzzle p2 = parse("S.\n..");
    SlideState s2(p2);
    s2.apply_move(Direction::Right);
    s2.apply_move(Direction::Down);
    s2.apply_move(Direction::Left);
    CHECK(s2.visited_count() == 4);
    CHECK(s2.is_complete());

    const Puzzle p3 = parse("S..\n...\n...");
    SlideState s3(p3);
    CHECK_THROWS_AS(s3.apply_move(Direction::Up), IllegalMoveError);
}

TEST_CASE("undo_move restores the exact previous state") {
    const Puzzle p = parse("S....");
    SlideState fresh(p);
    SlideState s(p);
    const UndoToken t = s.apply_move(Direction::Right);
    s.undo_move(t);
    CHECK(s.same_state(fresh));
}

TEST_CASE("undo_move rejects stale tokens") {
    const Puzzle p = parse("S..\n...\n...");
    SlideState s(p);
    const UndoToken first = s.apply_move(Direction::Right);
    s.apply_move(Direction::Down);
    CHECK_THROWS_AS(s.undo_move(first), UndoOrderViolation);
}

TEST_CASE("random apply/undo walk returns to the fresh state") {
    const Puzzle p = parse("S....\n.....\n.....\n.....\n.....");
    SlideState fresh(p);
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        SlideState s(p);
        std::vector<UndoToken> tokens;
        for (int i = 0; i < 10; ++i) {
            const MoveList legal = s.legal_moves();
            if (legal.empty()) break;
            tokens.push_back(s.apply_move(legal[rng.below_int(legal.size())]));
        }
        while (!tokens.empty()) {
            s.undo_move(tokens.back());
            tokens.pop_back();
        }
        CHECK(s.same_state(fresh));
    }
}

TEST_CASE("is_complete / is_deadlock on the fresh 3x3") {
    const Puzzle p = parse("S..\n...\n...");
    SlideState s(p);
    CHECK_FALSE(s.is_complete());
    CHECK_FALSE(s.is_deadlock());
}

TEST_CASE("verify_solution examples") {
    const Puzzle g3 = parse("S..\n...\n...");
    CHECK(verify_solution(g3, moves("RDLUR")).valid());
    CHECK(verify_solution(g3, moves("RDL")) ==
          VerifyResult{VerifyResult::Outcome::IncompleteCoverage, 0, 2});
    const Puzzle mid = parse(".S.");
    CHECK(verify_solution(mid, moves("LR")) ==
          VerifyResult{VerifyResult::Outcome::IllegalMove, 1, 0});
    CHECK(verify_solution(mid, moves("LR")).to_string() == "IllegalMove(1)");
}

TEST_CASE("expand_to_cells examples") {
    CHECK(expand_to_cells(parse("S.."), moves("R")) ==
          std::vector<Coord>{{0, 0}, {0, 1}, {0, 2}});
    CHECK(expand_to_cells(parse("S.\n.."), moves("RDL")) ==
          std::vector<Coord>{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    const auto cells = expand_to_cells(parse("S..\n...\n..."), moves("RDLUR"));
    CHECK(cells.size() == 9);
    CHECK(cells.back() == Coord{1, 1});
    CHECK_THROWS_AS(expand_to_cells(parse(".S."), moves("LR")), IllegalMoveError);
}

// Slide stop rule, exhaustively on all states reachable in <= 4 moves on
// 3x3 grids with <= 2 obstacles: the cell past the stop is blocked, and
// every traversed cell was unvisited.
namespace {

void check_stop_rule(SlideState& s, int depth) {
    const Puzzle& p = s.puzzle();
    for (Direction d : kDirections) {
        const auto slide = s.slide_destination(d);
        Coord step{s.agent().row + row_delta(d), s.agent().col + col_delta(d)};
        if (!slide) {
            const bool blocked =
                !p.in_bounds(step) || p.is_obstacle(step) || s.visited(step);
            CHECK(blocked);
            continue;
        }
        Coord c = s.agent();
        for (int i = 0; i < slide->length; ++i) {
            c = {c.row + row_delta(d), c.col + col_delta(d)};
            CHECK(p.is_free(c));
            CHECK_FALSE(s.visited(c));
        }
        CHECK(c == slide->stop);
        const Coord past{c.row + row_delta(d), c.col + col_delta(d)};
        CHECK((!p.in_bounds(past) || p.is_obstacle(past) || s.visited(past)));
    }
    if (depth == 0) return;
    for (Direction d : s.legal_moves()) {
        const UndoToken t = s.apply_move(d);
        check_stop_rule(s, depth - 1);
        s.undo_move(t);
    }
}

}  // namespace

TEST_CASE("slide stop rule holds on all shallow 3x3 states") {
    for (const Puzzle& p : oracle::puzzles_with_obstacle_subsets(3, 3, 2)) {
        SlideState s(p);
        check_stop_rule(s, 4);
    }
}

TEST_CASE("branch bound: non-fresh states have at most 2 legal moves") {
    auto family = oracle::puzzles_with_obstacle_subsets(3, 3, 2);
    auto family44 = oracle::puzzles_with_obstacle_subsets(4, 4, 2);
    family.insert(family.end(), family44.begin(), family44.end());
    for (const Puzzle& p : family) {
        SlideState s(p);
        CHECK(s.legal_moves().size() <= 4);
        // full reachability walk
        auto rec = [&](auto&& self) -> void {
            for (Direction d : s.legal_moves()) {
                const UndoToken t = s.apply_move(d);
                CHECK(s.legal_moves().size() <= 2);
                self(self);
                s.undo_move(t);
            }
        };
        rec(rec);
    }
}

TEST_CASE("model equivalence: cell paths == expanded move solutions (free <= 9)") {
    for (const Puzzle& p : oracle::all_grids_up_to_cells(9)) {
        const auto cell_paths = oracle::enumerate_cell_paths(p);
        std::set<oracle::CellPath> expanded;
        for (const auto& m : oracle::enumerate_move_solutions(p))
            expanded.insert(expand_to_cells(p, m));
        CHECK(cell_paths == expanded);
    }
}

TEST_CASE("verify valid iff expansion covers every free cell") {
    Rng rng(7);
    for (const Puzzle& p : oracle::puzzles_with_obstacle_subsets(3, 3, 2)) {
        // random move prefixes, valid or not
        for (int trial = 0; trial < 5; ++trial) {
            SlideState s(p);
            std::vector<Direction> seq;
            for (int i = 0; i < 6; ++i) {
                const MoveList legal = s.legal_moves();
                if (legal.empty()) break;
                const Direction d = legal[rng.below_int(legal.size())];
                s.apply_move(d);
                seq.push_back(d);
            }
            const VerifyResult v = verify_solution(p, seq);
            const auto cells = expand_to_cells(p, seq);
            CHECK(v.valid() == (static_cast<int>(cells.size()) == p.free_count()));
        }
    }
}

TEST_SUITE_END();
