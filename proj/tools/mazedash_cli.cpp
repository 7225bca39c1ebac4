// mazedash command-line front end. Everything goes through the C API in
// mazedash.h; this file only parses flags and formats output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mazedash.h"

namespace {

using nlohmann::ordered_json;

constexpr int kExitSolved = 0;
constexpr int kExitUnsolvable = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;
constexpr int kExitFailure = 4;

struct PuzzleHandle {
    md_puzzle* p = nullptr;
    ~PuzzleHandle() { md_puzzle_free(p); }
};

struct ResultHandle {
    md_solve_result* r = nullptr;
    ~ResultHandle() { md_solve_result_free(r); }
};

struct StringHandle {
    char* s = nullptr;
    ~StringHandle() { md_string_free(s); }
};

int fail(const std::string& message, int code) {
    std::cerr << "mazedash: " << message << "\n";
    return code;
}

std::uint64_t parse_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return std::stoull(text);
}

ordered_json puzzle_json(const md_puzzle* p) {
    return ordered_json{{"rows", md_puzzle_rows(p)},
                        {"cols", md_puzzle_cols(p)},
                        {"obstacles", md_puzzle_obstacle_count(p)},
                        {"free_cells", md_puzzle_free_count(p)},
                        {"start", {md_puzzle_start_row(p), md_puzzle_start_col(p)}}};
}

const char* solve_status_name(md_solve_status s) {
    switch (s) {
        case MD_SOLVE_SOLVED: return "solved";
        case MD_SOLVE_UNSOLVABLE: return "unsolvable";
        case MD_SOLVE_LIMIT_EXCEEDED: return "limit-exceeded";
        case MD_SOLVE_ERROR: return "error";
    }
    return "unknown";
}

int status_exit_code(md_solve_status s) {
    switch (s) {
        case MD_SOLVE_SOLVED: return kExitSolved;
        case MD_SOLVE_UNSOLVABLE: return kExitUnsolvable;
        case MD_SOLVE_LIMIT_EXCEEDED: return kExitLimit;
        case MD_SOLVE_ERROR: return kExitFailure;
    }
    return kExitFailure;
}

int run_solve(const std::string& input, const std::string& solver, const std::string& seed_text,
              std::uint64_t iterations, double exploration_c, std::int64_t timeout_ms,
              const std::string& sat_cmd, bool as_json, bool with_cells) {
    PuzzleHandle puzzle;
    if (md_puzzle_from_file(input.c_str(), &puzzle.p) != MD_OK)
        return fail(md_last_error(), kExitFailure);

    md_solve_options options;
    md_solve_options_init(&options);
    options.seed = parse_seed(seed_text);
    options.max_iterations = iterations;
    options.exploration_c = exploration_c;
    options.timeout_ms = timeout_ms;
    if (!sat_cmd.empty()) options.sat_command = sat_cmd.c_str();

    ResultHandle result;
    if (md_solve(puzzle.p, solver.c_str(), &options, &result.r) != MD_OK)
        return fail(md_last_error(), kExitFailure);

    const md_solve_status status = md_solve_result_status(result.r);
    const std::string moves = md_solve_result_moves(result.r);

    std::vector<std::pair<int, int>> cells;
    if (with_cells && status == MD_SOLVE_SOLVED) {
        int* flat = nullptr;
        size_t count = 0;
        if (md_expand_cells(puzzle.p, moves.c_str(), &flat, &count) != MD_OK)
            return fail(md_last_error(), kExitFailure);
        for (size_t i = 0; i < count; ++i) cells.emplace_back(flat[2 * i], flat[2 * i + 1]);
        md_cells_free(flat);
    }

    if (as_json) {
        ordered_json j;
        j["command"] = "solve";
        j["solver"] = solver;
        j["seed"] = options.seed;
        j["input"] = puzzle_json(puzzle.p);
        ordered_json res;
        res["status"] = solve_status_name(status);
        if (status == MD_SOLVE_SOLVED) res["moves"] = moves;
        res["nodes_expanded"] = md_solve_result_nodes_expanded(result.r);
        res["rollout_steps"] = md_solve_result_rollout_steps(result.r);
        res["peak_tracked_bytes"] = md_solve_result_peak_tracked_bytes(result.r);
        const std::string detail = md_solve_result_detail(result.r);
        if (!detail.empty()) res["detail"] = detail;
        if (with_cells && status == MD_SOLVE_SOLVED) {
            ordered_json arr = ordered_json::array();
            for (auto [r, c] : cells) arr.push_back({r, c});
            res["cells"] = arr;
        }
        j["result"] = res;
        // Wall-clock fields live in their own subtree so reproducibility
        // checks can strip them.
        j["timing"] = {{"elapsed_ms", md_solve_result_elapsed_ms(result.r)}};
        std::cout << j.dump(2) << "\n";
    } else {
        if (status == MD_SOLVE_SOLVED) {
            std::cout << moves << "\n";
            if (with_cells) {
                for (size_t i = 0; i < cells.size(); ++i)
                    std::cout << (i ? " " : "") << cells[i].first << "," << cells[i].second;
                std::cout << "\n";
            }
        } else {
            std::cout << solve_status_name(status) << "\n";
            const std::string detail = md_solve_result_detail(result.r);
            if (!detail.empty()) std::cerr << "mazedash: " << detail << "\n";
        }
    }
    return status_exit_code(status);
}

int run_verify(const std::string& input, const std::string& moves, bool as_json) {
    PuzzleHandle puzzle;
    if (md_puzzle_from_file(input.c_str(), &puzzle.p) != MD_OK)
        return fail(md_last_error(), kExitFailure);

    md_verify_outcome outcome;
    int detail = 0;
    if (md_verify(puzzle.p, moves.c_str(), &outcome, &detail) != MD_OK)
        return fail(md_last_error(), kExitFailure);

    if (as_json) {
        ordered_json res;
        switch (outcome) {
            case MD_VERIFY_VALID: res["outcome"] = "valid"; break;
            case MD_VERIFY_ILLEGAL_MOVE:
                res["outcome"] = "illegal-move";
                res["index"] = detail;
                break;
            case MD_VERIFY_INCOMPLETE_COVERAGE:
                res["outcome"] = "incomplete-coverage";
                res["missing"] = detail;
                break;
        }
        ordered_json j;
        j["command"] = "verify";
        j["moves"] = moves;
        j["input"] = puzzle_json(puzzle.p);
        j["result"] = res;
        std::cout << j.dump(2) << "\n";
    } else {
        switch (outcome) {
            case MD_VERIFY_VALID: std::cout << "Valid\n"; break;
            case MD_VERIFY_ILLEGAL_MOVE:
                std::cout << "IllegalMove(" << detail << ")\n";
                break;
            case MD_VERIFY_INCOMPLETE_COVERAGE:
                std::cout << "IncompleteCoverage(" << detail << ")\n";
                break;
        }
    }
    return outcome == MD_VERIFY_VALID ? kExitSolved : kExitUnsolvable;
}

int run_generate(int rows, int cols, int obstacles, const std::string& seed_text, int count,
                 const std::string& out_dir) {
    const std::uint64_t base_seed = parse_seed(seed_text);
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        md_generated* gen = nullptr;
        if (md_generate(rows, cols, obstacles, seed, 0, &gen) != MD_OK)
            return fail(md_last_error(), kExitFailure);

        StringHandle grid;
        if (md_puzzle_serialize(md_generated_puzzle(gen), &grid.s) != MD_OK) {
            md_generated_free(gen);
            return fail(md_last_error(), kExitFailure);
        }
        std::string text = "; seed=" + std::to_string(seed) +
                           " witness=" + md_generated_witness(gen) +
                           " obstacles=" + std::to_string(md_generated_obstacles(gen)) + "\n" +
                           grid.s;
        md_generated_free(gen);

        if (out_dir.empty()) {
            std::cout << text;
        } else {
            const std::string path = out_dir + "/maze-" + std::to_string(rows) + "x" +
                                     std::to_string(cols) + "-" + std::to_string(seed) + ".txt";
            std::ofstream out(path, std::ios::binary);
            if (!out || !(out << text))
                return fail("cannot write " + path, kExitFailure);
        }
    }
    return kExitSolved;
}

bool parse_sizes(const std::string& text, md_bench_config* cfg, std::string& error) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        pos = end + 1;
        int rows, cols, obstacles;
        if (std::sscanf(item.c_str(), "%dx%d:%d", &rows, &cols, &obstacles) != 3) {
            error = "bad size '" + item + "', expected RxC:K";
            return false;
        }
        if (md_bench_config_add_size(cfg, rows, cols, obstacles) != MD_OK) {
            error = md_last_error();
            return false;
        }
    }
    return true;
}

bool parse_solvers(const std::string& text, md_bench_config* cfg, std::string& error) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string name = text.substr(pos, end - pos);
        pos = end + 1;
        if (md_bench_config_add_solver(cfg, name.c_str()) != MD_OK) {
            error = md_last_error();
            return false;
        }
    }
    return true;
}

int run_bench_cmd(const std::string& sizes, const std::string& solvers, int repeats,
                  std::int64_t timeout_ms, const std::string& csv_path,
                  const std::string& out_path, int jobs, const std::string& seed_text,
                  std::uint64_t iterations, double exploration_c, const std::string& sat_cmd) {
    md_bench_config* cfg = md_bench_config_new();
    std::string error;
    if (!parse_sizes(sizes, cfg, error) || !parse_solvers(solvers, cfg, error)) {
        md_bench_config_free(cfg);
        return fail(error, kExitUsage);
    }
    md_bench_config_set_repeats(cfg, repeats);
    md_bench_config_set_timeout_ms(cfg, timeout_ms);
    md_bench_config_set_seed(cfg, parse_seed(seed_text));
    md_bench_config_set_jobs(cfg, jobs);
    md_bench_config_set_mcts(cfg, iterations, exploration_c);
    if (!sat_cmd.empty()) md_bench_config_set_sat_command(cfg, sat_cmd.c_str());

    md_bench_result* result = nullptr;
    const md_status rc = md_bench_run(cfg, &result);
    md_bench_config_free(cfg);
    if (rc != MD_OK)
        return fail(md_last_error(), rc == MD_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure);

    StringHandle table;
    md_bench_result_table(result, &table.s);
    if (out_path.empty()) {
        std::cout << table.s;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out || !(out << table.s)) {
            md_bench_result_free(result);
            return fail("cannot write " + out_path, kExitFailure);
        }
    }
    if (!csv_path.empty()) {
        StringHandle csv;
        md_bench_result_csv(result, &csv.s);
        std::ofstream out(csv_path, std::ios::binary);
        if (!out || !(out << csv.s)) {
            md_bench_result_free(result);
            return fail("cannot write " + csv_path, kExitFailure);
        }
    }
    md_bench_result_free(result);
    return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maze Dash full-coverage slide-puzzle workbench"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve a puzzle file");
    std::string solve_input, solve_solver, solve_seed = "0", solve_sat_cmd;
    std::uint64_t solve_iterations = 0;
    double solve_c = -1.0;
    std::int64_t solve_timeout = 0;
    bool solve_json = false, solve_cells = false;
    solve->add_option("--input", solve_input, "puzzle file")->required();
    solve->add_option("--solver", solve_solver, "backtrack|mcts|sat|sat-external")->required();
    solve->add_option("--iterations", solve_iterations, "MCTS iteration budget (0 = unbounded)");
    solve->add_option("--c", solve_c, "MCTS exploration constant (default sqrt(2))");
    solve->add_option("--seed", solve_seed, "RNG seed (number or 'random', default 0)");
    solve->add_option("--timeout-ms", solve_timeout, "per-run timeout in ms (0 = none)");
    solve->add_option("--sat-cmd", solve_sat_cmd, "external solver command with {file}");
    solve->add_flag("--json", solve_json, "machine-readable output");
    solve->add_flag("--cells", solve_cells, "also print the expanded cell path");

    // verify
    auto* verify = app.add_subcommand("verify", "Verify a move string against a puzzle");
    std::string verify_input, verify_moves;
    bool verify_json = false;
    verify->add_option("--input", verify_input, "puzzle file")->required();
    verify->add_option("--moves", verify_moves, "move string over URDL")->required();
    verify->add_flag("--json", verify_json, "machine-readable output");

    // generate
    auto* generate = app.add_subcommand("generate", "Generate solvable instances");
    int gen_rows = 0, gen_cols = 0, gen_obstacles = 0, gen_count = 1;
    std::string gen_seed = "0", gen_out;
    generate->add_option("--rows", gen_rows, "grid rows")->required();
    generate->add_option("--cols", gen_cols, "grid columns")->required();
    generate->add_option("--obstacles", gen_obstacles, "target obstacle count")->required();
    generate->add_option("--seed", gen_seed, "base seed (number or 'random', default 0)");
    generate->add_option("--count", gen_count, "number of instances (default 1)");
    generate->add_option("--out", gen_out, "output directory (default: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the solver benchmark matrix");
    std::string bench_sizes, bench_solvers, bench_csv, bench_out, bench_seed = "0",
                                                                  bench_sat_cmd;
    int bench_repeats = 1, bench_jobs = 1;
    std::int64_t bench_timeout = 0;
    std::uint64_t bench_iterations = 0;
    double bench_c = -1.0;
    bench->add_option("--sizes", bench_sizes, "comma list of RxC:K")->required();
    bench->add_option("--solvers", bench_solvers, "comma list of solvers")->required();
    bench->add_option("--repeats", bench_repeats, "trials per size")->required();
    bench->add_option("--timeout-ms", bench_timeout, "per-trial timeout in ms (0 = none)");
    bench->add_option("--csv", bench_csv, "write per-trial records to this CSV file");
    bench->add_option("--out", bench_out, "write the markdown report here (default: stdout)");
    bench->add_option("--jobs", bench_jobs, "parallel worker threads (default 1)");
    bench->add_option("--seed", bench_seed, "base seed (number or 'random', default 0)");
    bench->add_option("--iterations", bench_iterations, "MCTS iteration budget (0 = unbounded)");
    bench->add_option("--c", bench_c, "MCTS exploration constant");
    bench->add_option("--sat-cmd", bench_sat_cmd, "external solver command with {file}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            if (solve_solver == "sat-external" && solve_sat_cmd.empty())
                return fail("--solver sat-external requires --sat-cmd", kExitUsage);
            return run_solve(solve_input, solve_solver, solve_seed, solve_iterations, solve_c,
                             solve_timeout, solve_sat_cmd, solve_json, solve_cells);
        }
        if (verify->parsed()) return run_verify(verify_input, verify_moves, verify_json);
        if (generate->parsed())
            return run_generate(gen_rows, gen_cols, gen_obstacles, gen_seed, gen_count, gen_out);
        if (bench->parsed()) {
            if (bench_solvers.find("sat-external") != std::string::npos && bench_sat_cmd.empty())
                return fail("sat-external solver requires --sat-cmd", kExitUsage);
            return run_bench_cmd(bench_sizes, bench_solvers, bench_repeats, bench_timeout,
                                 bench_csv, bench_out, bench_jobs, bench_seed, bench_iterations,
                                 bench_c, bench_sat_cmd);
        }
    } catch (const std::invalid_argument& e) {
        return fail(e.what(), kExitUsage);
    } catch (const std::exception& e) {
        return fail(e.what(), kExitFailure);
    }
    return kExitUsage;
}
