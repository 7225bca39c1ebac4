#include "mazedash.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

#include "mazedash/backtrack.hpp"
#include "mazedash/bench.hpp"
#include "mazedash/generator.hpp"
#include "mazedash/mcts.hpp"
#include "mazedash/sat.hpp"

using namespace mazedash;

namespace {

thread_local std::string g_last_error;

md_status fail(md_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Catches everything a wrapped call can throw and maps it onto a status.
template <typename Fn>
md_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        return fail(MD_ERR_PARSE, e.what());
    } catch (const IllegalMoveError& e) {
        return fail(MD_ERR_ILLEGAL_MOVE, e.what());
    } catch (const GenerationExhausted& e) {
        return fail(MD_ERR_GENERATION, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(MD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(MD_ERR_INTERNAL, "unknown error");
    }
}

}  // namespace

struct md_puzzle {
    Puzzle puzzle;
};

struct md_solve_result {
    SolveResult result;
    std::string moves;
};

struct md_generated {
    md_puzzle puzzle;
    std::string witness;
    int obstacles;
};

struct md_bench_config {
    BenchConfig config;
};

struct md_bench_result {
    std::vector<BenchRecord> records;
};

extern "C" {

const char* md_last_error(void) { return g_last_error.c_str(); }

void md_string_free(char* s) { delete[] s; }

md_status md_puzzle_parse(const char* text, md_puzzle** out) {
    if (!text || !out) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new md_puzzle{Puzzle::parse(text)};
        return MD_OK;
    });
}

md_status md_puzzle_from_file(const char* path, md_puzzle** out) {
    if (!path || !out) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> md_status {
        std::ifstream in(path, std::ios::binary);
        if (!in) return fail(MD_ERR_IO, std::string("cannot open ") + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        *out = new md_puzzle{Puzzle::parse(buf.str())};
        return MD_OK;
    });
}

md_status md_puzzle_serialize(const md_puzzle* p, char** out_text) {
    if (!p || !out_text) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_text = copy_string(p->puzzle.serialize());
        return MD_OK;
    });
}

void md_puzzle_free(md_puzzle* p) { delete p; }

int md_puzzle_rows(const md_puzzle* p) { return p->puzzle.rows(); }
int md_puzzle_cols(const md_puzzle* p) { return p->puzzle.cols(); }
int md_puzzle_free_count(const md_puzzle* p) { return p->puzzle.free_count(); }
int md_puzzle_obstacle_count(const md_puzzle* p) { return p->puzzle.obstacle_count(); }
int md_puzzle_start_row(const md_puzzle* p) { return p->puzzle.start().row; }
int md_puzzle_start_col(const md_puzzle* p) { return p->puzzle.start().col; }

md_status md_verify(const md_puzzle* p, const char* moves, md_verify_outcome* outcome,
                    int* detail) {
    if (!p || !moves || !outcome) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto parsed = moves_from_string(moves);
        const VerifyResult v = verify_solution(p->puzzle, parsed);
        switch (v.outcome) {
            case VerifyResult::Outcome::Valid:
                *outcome = MD_VERIFY_VALID;
                if (detail) *detail = 0;
                break;
            case VerifyResult::Outcome::IllegalMove:
                *outcome = MD_VERIFY_ILLEGAL_MOVE;
                if (detail) *detail = v.index;
                break;
            case VerifyResult::Outcome::IncompleteCoverage:
                *outcome = MD_VERIFY_INCOMPLETE_COVERAGE;
                if (detail) *detail = v.missing;
                break;
        }
        return MD_OK;
    });
}

md_status md_expand_cells(const md_puzzle* p, const char* moves, int** out_cells,
                          size_t* out_count) {
    if (!p || !moves || !out_cells || !out_count)
        return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto parsed = moves_from_string(moves);
        const auto cells = expand_to_cells(p->puzzle, parsed);
        int* flat = new int[cells.size() * 2];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            flat[2 * i] = cells[i].row;
            flat[2 * i + 1] = cells[i].col;
        }
        *out_cells = flat;
        *out_count = cells.size();
        return MD_OK;
    });
}

void md_cells_free(int* cells) { delete[] cells; }

void md_solve_options_init(md_solve_options* options) {
    if (!options) return;
    options->seed = 0;
    options->max_iterations = 0;
    options->exploration_c = 1.4142135623730951;
    options->max_nodes = 0;
    options->timeout_ms = 0;
    options->sat_command = nullptr;
}

md_status md_solve(const md_puzzle* p, const char* solver, const md_solve_options* options,
                   md_solve_result** out) {
    if (!p || !solver || !out) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    md_solve_options defaults;
    md_solve_options_init(&defaults);
    const md_solve_options& opt = options ? *options : defaults;

    const auto kind = solver_kind_from_string(solver);
    if (!kind) return fail(MD_ERR_INVALID_ARGUMENT, std::string("unknown solver: ") + solver);
    if (*kind == SolverKind::SatExternal && (!opt.sat_command || !*opt.sat_command))
        return fail(MD_ERR_INVALID_ARGUMENT, "sat-external requires sat_command");

    return guarded([&] {
        SearchLimits limits;
        if (opt.timeout_ms > 0) limits.timeout_ms = opt.timeout_ms;
        if (opt.max_nodes > 0) limits.max_nodes = opt.max_nodes;

        SolveResult r;
        switch (*kind) {
            case SolverKind::Backtrack:
                r = solve_backtrack(p->puzzle, limits);
                break;
            case SolverKind::Mcts: {
                MctsConfig cfg;
                cfg.seed = opt.seed;
                if (opt.max_iterations > 0) cfg.max_iterations = opt.max_iterations;
                if (opt.exploration_c >= 0) cfg.exploration_c = opt.exploration_c;
                cfg.timeout_ms = limits.timeout_ms;
                r = solve_mcts(p->puzzle, cfg);
                break;
            }
            case SolverKind::SatInternal:
                r = solve_sat(p->puzzle, limits);
                break;
            case SolverKind::SatExternal:
                r = solve_sat_external_cmd(p->puzzle, opt.sat_command, limits);
                break;
        }
        auto* res = new md_solve_result{std::move(r), {}};
        res->moves = moves_to_string(res->result.moves);
        *out = res;
        return MD_OK;
    });
}

void md_solve_result_free(md_solve_result* r) { delete r; }

md_solve_status md_solve_result_status(const md_solve_result* r) {
    switch (r->result.status) {
        case SolveStatus::Solved: return MD_SOLVE_SOLVED;
        case SolveStatus::Unsolvable: return MD_SOLVE_UNSOLVABLE;
        case SolveStatus::LimitExceeded: return MD_SOLVE_LIMIT_EXCEEDED;
        case SolveStatus::Error: return MD_SOLVE_ERROR;
    }
    return MD_SOLVE_ERROR;
}

const char* md_solve_result_moves(const md_solve_result* r) { return r->moves.c_str(); }
uint64_t md_solve_result_nodes_expanded(const md_solve_result* r) {
    return r->result.nodes_expanded;
}
uint64_t md_solve_result_rollout_steps(const md_solve_result* r) {
    return r->result.rollout_steps;
}
int64_t md_solve_result_elapsed_ms(const md_solve_result* r) { return r->result.elapsed_ms; }
uint64_t md_solve_result_peak_tracked_bytes(const md_solve_result* r) {
    return r->result.peak_tracked_bytes;
}
const char* md_solve_result_detail(const md_solve_result* r) { return r->result.detail.c_str(); }

md_status md_encode_dimacs(const md_puzzle* p, char** out_text) {
    if (!p || !out_text) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_text = copy_string(emit_dimacs(encode_cnf(p->puzzle).formula));
        return MD_OK;
    });
}

md_status md_generate(int rows, int cols, int target_obstacles, uint64_t seed, int max_retries,
                      md_generated** out) {
    if (!out) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        GenConfig cfg;
        cfg.rows = rows;
        cfg.cols = cols;
        cfg.target_obstacles = target_obstacles;
        cfg.seed = seed;
        if (max_retries > 0) cfg.max_retries = max_retries;
        GeneratedInstance g = generate_puzzle(cfg);
        *out = new md_generated{{std::move(g.puzzle)}, moves_to_string(g.witness),
                                g.actual_obstacles};
        return MD_OK;
    });
}

void md_generated_free(md_generated* g) { delete g; }

const md_puzzle* md_generated_puzzle(const md_generated* g) { return &g->puzzle; }
const char* md_generated_witness(const md_generated* g) { return g->witness.c_str(); }
int md_generated_obstacles(const md_generated* g) { return g->obstacles; }

md_bench_config* md_bench_config_new(void) { return new (std::nothrow) md_bench_config{}; }
void md_bench_config_free(md_bench_config* cfg) { delete cfg; }

md_status md_bench_config_add_size(md_bench_config* cfg, int rows, int cols, int obstacles) {
    if (!cfg) return fail(MD_ERR_INVALID_ARGUMENT, "null config");
    if (rows <= 0 || cols <= 0 || obstacles < 0 || obstacles >= rows * cols)
        return fail(MD_ERR_INVALID_ARGUMENT, "bad bench size");
    cfg->config.sizes.push_back({rows, cols, obstacles});
    return MD_OK;
}

md_status md_bench_config_add_solver(md_bench_config* cfg, const char* name) {
    if (!cfg || !name) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    const auto kind = solver_kind_from_string(name);
    if (!kind) return fail(MD_ERR_INVALID_ARGUMENT, std::string("unknown solver: ") + name);
    cfg->config.solvers.push_back(*kind);
    return MD_OK;
}

md_status md_bench_config_set_repeats(md_bench_config* cfg, int repeats) {
    if (!cfg || repeats < 1) return fail(MD_ERR_INVALID_ARGUMENT, "repeats must be >= 1");
    cfg->config.repeats = repeats;
    return MD_OK;
}

md_status md_bench_config_set_timeout_ms(md_bench_config* cfg, int64_t timeout_ms) {
    if (!cfg) return fail(MD_ERR_INVALID_ARGUMENT, "null config");
    if (timeout_ms > 0)
        cfg->config.timeout_ms = timeout_ms;
    else
        cfg->config.timeout_ms.reset();
    return MD_OK;
}

md_status md_bench_config_set_seed(md_bench_config* cfg, uint64_t seed) {
    if (!cfg) return fail(MD_ERR_INVALID_ARGUMENT, "null config");
    cfg->config.base_seed = seed;
    return MD_OK;
}

md_status md_bench_config_set_jobs(md_bench_config* cfg, int jobs) {
    if (!cfg || jobs < 1) return fail(MD_ERR_INVALID_ARGUMENT, "jobs must be >= 1");
    cfg->config.jobs = jobs;
    return MD_OK;
}

md_status md_bench_config_set_mcts(md_bench_config* cfg, uint64_t iterations, double c) {
    if (!cfg) return fail(MD_ERR_INVALID_ARGUMENT, "null config");
    if (iterations > 0) cfg->config.mcts_iterations = iterations;
    if (c >= 0) cfg->config.mcts_c = c;
    return MD_OK;
}

md_status md_bench_config_set_sat_command(md_bench_config* cfg, const char* command) {
    if (!cfg || !command) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    cfg->config.sat_command = command;
    return MD_OK;
}

md_status md_bench_run(const md_bench_config* cfg, md_bench_result** out) {
    if (!cfg || !out) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new md_bench_result{run_bench(cfg->config)};
        return MD_OK;
    });
}

void md_bench_result_free(md_bench_result* r) { delete r; }

size_t md_bench_result_count(const md_bench_result* r) { return r->records.size(); }

md_status md_bench_result_csv(const md_bench_result* r, char** out_text) {
    if (!r || !out_text) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_text = copy_string(emit_csv(r->records));
        return MD_OK;
    });
}

md_status md_bench_result_table(const md_bench_result* r, char** out_text) {
    if (!r || !out_text) return fail(MD_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_text = copy_string(emit_table(r->records));
        return MD_OK;
    });
}

}  // extern "C"
