#include "doctest.h"
#include "mazedash/backtrack.hpp"
#include "oracles.hpp"

using namespace mazedash;

TEST_SUITE_BEGIN("backtrack");

TEST_CASE("single-branch corridor") {
    const auto r = solve_backtrack(Puzzle::parse("S.."));
    CHECK(r.status == SolveStatus::Solved);
    CHECK(moves_to_string(r.moves) == "R");
}

TEST_CASE("mid-start corridor is unsolvable") {
    const auto r = solve_backtrack(Puzzle::parse(".S."));
    CHECK(r.status == SolveStatus::Unsolvable);
    CHECK(r.nodes_expanded == 2);  // both branches deadlock immediately
}

TEST_CASE("3x3 finds the canonical-order first solution") {
    const auto r = solve_backtrack(Puzzle::parse("S..\n...\n..."));
    CHECK(r.status == SolveStatus::Solved);
    CHECK(moves_to_string(r.moves) == "RDLUR");
}

TEST_CASE("one-cell puzzle solves with an empty move list") {
    const auto r = solve_backtrack(Puzzle::parse("S"));
    CHECK(r.status == SolveStatus::Solved);
    CHECK(r.moves.empty());
}

TEST_CASE("node limit reports LimitExceeded") {
    SearchLimits limits;
    limits.max_nodes = 3;
    const auto r = solve_backtrack(Puzzle::parse("S....\n.....\n#....\n.....\n....."), limits);
    CHECK(r.status == SolveStatus::LimitExceeded);
}

TEST_CASE("verdicts match the independent cell-path oracle") {
    int solvable = 0, unsolvable = 0;
    for (const Puzzle& p : oracle::all_grids_up_to_cells(9)) {
        const auto r = solve_backtrack(p);
        const bool expect = oracle::cell_model_solvable(p);
        REQUIRE(r.status == (expect ? SolveStatus::Solved : SolveStatus::Unsolvable));
        if (expect) {
            ++solvable;
            CHECK(verify_solution(p, r.moves).valid());
        } else {
            ++unsolvable;
        }
    }
    // the family must exercise both verdicts heavily
    CHECK(solvable > 1000);
    CHECK(unsolvable > 1000);
}

TEST_CASE("deterministic across repeated runs") {
    const Puzzle p = Puzzle::parse("S....\n..#..\n.....\n.#...\n.....");
    const auto a = solve_backtrack(p);
    const auto b = solve_backtrack(p);
    CHECK(a.status == b.status);
    CHECK(a.moves == b.moves);
    CHECK(a.nodes_expanded == b.nodes_expanded);
    CHECK(a.peak_tracked_bytes == b.peak_tracked_bytes);
}

TEST_CASE("peak tracked memory stays linear in the grid, not the search") {
    // Same grid, wildly different search effort: memory must not follow
    // node counts.
    const Puzzle easy = Puzzle::parse("S....\n.....\n.....\n.....\n.....");
    const auto r1 = solve_backtrack(easy);
    SearchLimits hard_limits;
    hard_limits.max_nodes = 200000;
    const Puzzle hard = Puzzle::parse(".S...\n.....\n.....\n.....\n....#");
    const auto r2 = solve_backtrack(hard, hard_limits);
    CHECK(r2.nodes_expanded > 10 * r1.nodes_expanded);
    CHECK(r2.peak_tracked_bytes <= 2 * r1.peak_tracked_bytes);
}

TEST_SUITE_END();
