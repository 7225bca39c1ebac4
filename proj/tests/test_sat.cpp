#include <map>

#include "doctest.h"
#include "mazedash/backtrack.hpp"
#include "mazedash/rng.hpp"
#include "mazedash/sat.hpp"
#include "oracles.hpp"

using namespace mazedash;

TEST_SUITE_BEGIN("sat");

TEST_CASE("varmap is a contiguous bijection over free cells") {
    const Puzzle p = Puzzle::parse("S.#\n...\n#..");
    const VarMap vm(p);
    CHECK(vm.steps() == 7);
    CHECK(vm.num_vars() == 49);
    for (int t = 0; t < vm.steps(); ++t) {
        for (int c = 0; c < vm.steps(); ++c) {
            const int v = vm.var(t, c);
            CHECK(v >= 1);
            CHECK(v <= vm.num_vars());
            CHECK(vm.step_of(v) == t);
            CHECK(vm.cell_of(v) == c);
        }
    }
    CHECK(vm.cell_index({0, 2}) == -1);  // obstacle
    CHECK(vm.cell_index({-1, 0}) == -1);
    CHECK(vm.cell_index(p.start()) == 0);  // row-major first free cell
}

TEST_CASE("encoding: 1x2 has 4 vars and a unique model") {
    const Puzzle p = Puzzle::parse("S.");
    const auto [formula, vm] = encode_cnf(p);
    CHECK(formula.num_vars() == 4);

    // brute force all 16 assignments with an independent evaluator
    int models = 0;
    std::vector<std::uint8_t> satisfying;
    for (int bits = 0; bits < 16; ++bits) {
        std::vector<std::uint8_t> a(5, 0);
        for (int v = 1; v <= 4; ++v) a[v] = (bits >> (v - 1)) & 1;
        if (satisfies(formula, a)) {
            ++models;
            satisfying = a;
        }
    }
    REQUIRE(models == 1);
    CHECK(satisfying[vm.var(0, vm.cell_index({0, 0}))] == 1);
    CHECK(satisfying[vm.var(1, vm.cell_index({0, 1}))] == 1);
    CHECK(decode_model(satisfying, vm, p) == std::vector<Direction>{Direction::Right});
}

TEST_CASE("encoding: variable count is free_count squared") {
    CHECK(encode_cnf(Puzzle::parse("S..\n...\n...")).formula.num_vars() == 81);
    CHECK(encode_cnf(Puzzle::parse("S.#\n.#.")).formula.num_vars() == 16);
}

TEST_CASE("encoding: clause counts match the closed forms") {
    for (const char* text : {"S.", "S..\n...\n...", "S.#\n...", ".S..\n.#.."}) {
        const Puzzle p = Puzzle::parse(text);
        const auto [formula, vm] = encode_cnf(p);
        const std::size_t T = static_cast<std::size_t>(vm.steps());
        const std::size_t exactly_one = 2 * T * (1 + T * (T - 1) / 2);
        const std::size_t adjacency = T > 1 ? (T - 1) * T : 0;
        // independent scan for straight triples (prev and ahead both free)
        std::size_t straight_pairs = 0;
        for (int c = 0; c < vm.steps(); ++c) {
            const Coord at = vm.cell_coord(c);
            for (Direction d : kDirections) {
                const Coord prev{at.row - row_delta(d), at.col - col_delta(d)};
                const Coord ahead{at.row + row_delta(d), at.col + col_delta(d)};
                if (p.is_free(prev) && p.is_free(ahead)) ++straight_pairs;
            }
        }
        const std::size_t straight = T > 2 ? (T - 2) * straight_pairs : 0;
        CHECK(formula.clause_count() == 1 + exactly_one + adjacency + straight);
    }
}

TEST_CASE("encoding: mid-start corridor is unsat, matching backtracking") {
    const Puzzle p = Puzzle::parse(".S.");
    const auto enc = encode_cnf(p);
    CHECK(solve_sat_internal(enc.formula).kind == SatResult::Kind::Unsat);
    CHECK(solve_backtrack(p).status == SolveStatus::Unsolvable);
}

TEST_CASE("dimacs output format") {
    CnfFormula f;
    f.set_num_vars(2);
    f.add_clause({1});
    f.add_clause({-1, 2});
    CHECK(emit_dimacs(f) == "p cnf 2 2\n1 0\n-1 2 0\n");

    CnfFormula empty;
    empty.set_num_vars(3);
    CHECK(emit_dimacs(empty) == "p cnf 3 0\n");
}

TEST_CASE("dimacs round trip preserves the clause multiset") {
    const auto enc = encode_cnf(Puzzle::parse("S."));
    const CnfFormula parsed = parse_dimacs(emit_dimacs(enc.formula));
    CHECK(parsed == enc.formula);

    const auto enc2 = encode_cnf(Puzzle::parse("S..\n#.."));
    CHECK(parse_dimacs(emit_dimacs(enc2.formula)) == enc2.formula);
}

TEST_CASE("dimacs parser accepts comments and split clauses, rejects junk") {
    const CnfFormula f = parse_dimacs("c hello\np cnf 3 2\nc mid\n1 -2 0\n2\n3 0\n");
    CHECK(f.num_vars() == 3);
    REQUIRE(f.clause_count() == 2);
    CHECK(f.clause(1).size() == 2);
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), DimacsParseError);            // no header
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), DimacsParseError);  // out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 2\n1 0\n"), DimacsParseError);  // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1\n"), DimacsParseError);    // unterminated
}

TEST_CASE("dpll: unit chain and contradiction") {
    CnfFormula f;
    f.set_num_vars(2);
    f.add_clause({1});
    f.add_clause({-1, 2});
    const auto r = solve_sat_internal(f);
    REQUIRE(r.kind == SatResult::Kind::Sat);
    CHECK(r.assignment[1] == 1);
    CHECK(r.assignment[2] == 1);

    CnfFormula g;
    g.set_num_vars(1);
    g.add_clause({1});
    g.add_clause({-1});
    CHECK(solve_sat_internal(g).kind == SatResult::Kind::Unsat);
}

TEST_CASE("dpll: pure literals and branching") {
    // (a|b) & (a|!b) & (c|d): a pure-positive, c/d one-sided
    CnfFormula f;
    f.set_num_vars(4);
    f.add_clause({1, 2});
    f.add_clause({1, -2});
    f.add_clause({3, 4});
    const auto r = solve_sat_internal(f);
    REQUIRE(r.kind == SatResult::Kind::Sat);
    CHECK(satisfies(f, r.assignment));
    CHECK(r.decisions == 0);  // pure-literal elimination needs no branching here
}

TEST_CASE("dpll solves the 3x3 encoding and the model decodes to a valid path") {
    const Puzzle p = Puzzle::parse("S..\n...\n...");
    const auto enc = encode_cnf(p);
    const auto r = solve_sat_internal(enc.formula);
    REQUIRE(r.kind == SatResult::Kind::Sat);
    CHECK(satisfies(enc.formula, r.assignment));
    const auto moves = decode_model(r.assignment, enc.vars, p);
    CHECK(verify_solution(p, moves).valid());
}

TEST_CASE("decode_model rejects malformed assignments") {
    const Puzzle p = Puzzle::parse("S.");
    const auto enc = encode_cnf(p);
    std::vector<std::uint8_t> two_at_step0(5, 0);
    two_at_step0[enc.vars.var(0, 0)] = 1;
    two_at_step0[enc.vars.var(0, 1)] = 1;
    two_at_step0[enc.vars.var(1, 1)] = 1;
    CHECK_THROWS_AS(decode_model(two_at_step0, enc.vars, p), MalformedModelError);
    std::vector<std::uint8_t> missing(5, 0);
    missing[enc.vars.var(0, 0)] = 1;
    CHECK_THROWS_AS(decode_model(missing, enc.vars, p), MalformedModelError);
}

TEST_CASE("solve_sat pipeline: solved, unsolvable, limit") {
    const auto solved = solve_sat(Puzzle::parse("S.\n.."));
    CHECK(solved.status == SolveStatus::Solved);
    CHECK(moves_to_string(solved.moves) == "RDL");

    CHECK(solve_sat(Puzzle::parse(".S.")).status == SolveStatus::Unsolvable);

    SearchLimits limits;
    limits.max_nodes = 1;
    const Puzzle big = Puzzle::parse("S....\n.....\n.....\n.....\n....#");
    CHECK(solve_sat(big, limits).status == SolveStatus::LimitExceeded);
}

TEST_CASE("verdicts agree with backtracking on all small grids") {
    for (const Puzzle& p : oracle::all_grids_up_to_cells(8)) {
        const auto bt = solve_backtrack(p).status;
        const auto sat = solve_sat(p);
        REQUIRE(sat.status == (bt == SolveStatus::Solved ? SolveStatus::Solved
                                                         : SolveStatus::Unsolvable));
        if (sat.status == SolveStatus::Solved) CHECK(verify_solution(p, sat.moves).valid());
    }
}

TEST_CASE("verdicts agree with backtracking on seeded random 4x4 instances") {
    Rng rng(404);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Coord> obstacles;
        std::vector<std::uint8_t> blocked(16, 0);
        const int k = rng.below_int(6);
        for (int i = 0; i < k; ++i) {
            const int cell = rng.below_int(16);
            if (!blocked[cell]) {
                blocked[cell] = 1;
                obstacles.push_back({cell / 4, cell % 4});
            }
        }
        int start_cell = rng.below_int(16);
        while (blocked[start_cell]) start_cell = rng.below_int(16);
        const Puzzle p(4, 4, obstacles, {start_cell / 4, start_cell % 4});
        const auto bt = solve_backtrack(p).status;
        const auto sat = solve_sat(p);
        REQUIRE(sat.status == (bt == SolveStatus::Solved ? SolveStatus::Solved
                                                         : SolveStatus::Unsolvable));
    }
}

TEST_CASE("external: SAT-competition output parsing") {
    CnfFormula f;
    f.set_num_vars(3);
    f.add_clause({1});
    f.add_clause({-2, 3});

    const auto unsat = solve_sat_external(f, "echo 's UNSATISFIABLE' ; true {file}");
    CHECK(unsat.kind == SatResult::Kind::Unsat);

    const auto sat =
        solve_sat_external(f, "printf 's SATISFIABLE\\nv 1 -2 3 0\\n' ; true {file}");
    REQUIRE(sat.kind == SatResult::Kind::Sat);
    CHECK(sat.assignment[1] == 1);
    CHECK(sat.assignment[2] == 0);
    CHECK(sat.assignment[3] == 1);
}

TEST_CASE("external: launch failures and junk output map to Unknown") {
    CnfFormula f;
    f.set_num_vars(1);
    f.add_clause({1});
    CHECK(solve_sat_external(f, "/no/such/solver-binary {file}").kind ==
          SatResult::Kind::Unknown);
    CHECK(solve_sat_external(f, "echo hello; true {file}").kind == SatResult::Kind::Unknown);
    // SAT claim with a model that does not satisfy the formula
    const auto lying = solve_sat_external(f, "printf 's SATISFIABLE\\nv -1 0\\n' # {file}");
    CHECK(lying.kind == SatResult::Kind::Unknown);
    // missing {file} placeholder is caller misuse
    CHECK_THROWS_AS(solve_sat_external(f, "echo"), std::invalid_argument);
}

TEST_CASE("external: the file passed to the solver is real DIMACS") {
    const Puzzle p = Puzzle::parse("S.\n..");
    const auto enc = encode_cnf(p);
    // "solver" that validates the header appears in the file
    const auto r = solve_sat_external(
        enc.formula, "grep -q '^p cnf 16 ' {file} && echo 's UNSATISFIABLE'");
    CHECK(r.kind == SatResult::Kind::Unsat);
}

TEST_CASE("external solve pipeline via a scripted solver") {
    // Delegate to the internal solver through a DIMACS file and scripted
    // verdict; exercises the full temp-file round trip.
    const Puzzle p = Puzzle::parse("S.\n..");
    const auto direct = solve_sat(p);
    REQUIRE(direct.status == SolveStatus::Solved);

    // fake solver printing the known model of the direct run
    const auto enc = encode_cnf(p);
    const auto internal = solve_sat_internal(enc.formula);
    std::string vline = "v";
    for (int v = 1; v <= enc.formula.num_vars(); ++v)
        vline += (internal.assignment[v] ? " " : " -") + std::to_string(v);
    vline += " 0";
    const auto res = solve_sat_external_cmd(
        p, "printf 's SATISFIABLE\\n" + vline + "\\n' # {file}");
    REQUIRE(res.status == SolveStatus::Solved);
    CHECK(verify_solution(p, res.moves).valid());

    const auto err = solve_sat_external_cmd(p, "/no/such/binary {file}");
    CHECK(err.status == SolveStatus::Error);
}

TEST_SUITE_END();
