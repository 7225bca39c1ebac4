/*
 * mazedash C API: slide-puzzle full-coverage solvers (backtracking, MCTS,
 * SAT), a solvable-instance generator and a benchmark harness behind opaque
 * handles. All functions return md_status; every out-pointer is only valid
 * on MD_OK and must be released with the matching md_*_free call.
 */
#ifndef MAZEDASH_H
#define MAZEDASH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    MD_OK = 0,
    MD_ERR_INVALID_ARGUMENT = 1,
    MD_ERR_PARSE = 2,
    MD_ERR_ILLEGAL_MOVE = 3,
    MD_ERR_IO = 4,
    MD_ERR_GENERATION = 5,
    MD_ERR_INTERNAL = 6
} md_status;

/* Message for the most recent failing call on this thread. */
const char* md_last_error(void);

void md_string_free(char* s);

/* ---- puzzles ---------------------------------------------------------- */

typedef struct md_puzzle md_puzzle;

/* Text format: rows of '.' (free), '#' (obstacle), 'S' (start, exactly
 * one); lines starting with ';' are comments; all rows equal length. */
md_status md_puzzle_parse(const char* text, md_puzzle** out);
md_status md_puzzle_from_file(const char* path, md_puzzle** out);
/* Canonical form: no comments, newline-terminated rows. */
md_status md_puzzle_serialize(const md_puzzle* p, char** out_text);
void md_puzzle_free(md_puzzle* p);

int md_puzzle_rows(const md_puzzle* p);
int md_puzzle_cols(const md_puzzle* p);
int md_puzzle_free_count(const md_puzzle* p);
int md_puzzle_obstacle_count(const md_puzzle* p);
int md_puzzle_start_row(const md_puzzle* p);
int md_puzzle_start_col(const md_puzzle* p);

/* ---- verification ------------------------------------------------------ */

typedef enum {
    MD_VERIFY_VALID = 0,
    MD_VERIFY_ILLEGAL_MOVE = 1,
    MD_VERIFY_INCOMPLETE_COVERAGE = 2
} md_verify_outcome;

/* moves is a string over "URDL". detail receives the offending move index
 * (illegal move) or the number of uncovered cells (incomplete coverage). */
md_status md_verify(const md_puzzle* p, const char* moves, md_verify_outcome* outcome,
                    int* detail);

/* Expands a replayable move string into the visited cell sequence,
 * (row, col) pairs flattened into 2*count ints. */
md_status md_expand_cells(const md_puzzle* p, const char* moves, int** out_cells,
                          size_t* out_count);
void md_cells_free(int* cells);

/* ---- solving ----------------------------------------------------------- */

typedef enum {
    MD_SOLVE_SOLVED = 0,
    MD_SOLVE_UNSOLVABLE = 1,
    MD_SOLVE_LIMIT_EXCEEDED = 2,
    MD_SOLVE_ERROR = 3
} md_solve_status;

typedef struct {
    uint64_t seed;            /* randomized solvers; default 0 */
    uint64_t max_iterations;  /* MCTS iteration budget; 0 = unbounded */
    double exploration_c;     /* MCTS UCT constant; default sqrt(2) */
    uint64_t max_nodes;       /* backtrack/sat node budget; 0 = unbounded */
    int64_t timeout_ms;       /* <= 0 = unbounded */
    const char* sat_command;  /* template with {file}, sat-external only */
} md_solve_options;

void md_solve_options_init(md_solve_options* options);

typedef struct md_solve_result md_solve_result;

/* solver: "backtrack", "mcts", "sat" (internal DPLL), "sat-external". */
md_status md_solve(const md_puzzle* p, const char* solver, const md_solve_options* options,
                   md_solve_result** out);
void md_solve_result_free(md_solve_result* r);

md_solve_status md_solve_result_status(const md_solve_result* r);
/* Move string when solved, "" otherwise. Owned by the result. */
const char* md_solve_result_moves(const md_solve_result* r);
uint64_t md_solve_result_nodes_expanded(const md_solve_result* r);
uint64_t md_solve_result_rollout_steps(const md_solve_result* r);
int64_t md_solve_result_elapsed_ms(const md_solve_result* r);
uint64_t md_solve_result_peak_tracked_bytes(const md_solve_result* r);
/* Failure detail for MD_SOLVE_ERROR / limit reasons, "" otherwise. */
const char* md_solve_result_detail(const md_solve_result* r);

/* ---- CNF export -------------------------------------------------------- */

/* DIMACS CNF of the puzzle's propositional encoding. */
md_status md_encode_dimacs(const md_puzzle* p, char** out_text);

/* ---- generation -------------------------------------------------------- */

typedef struct md_generated md_generated;

md_status md_generate(int rows, int cols, int target_obstacles, uint64_t seed, int max_retries,
                      md_generated** out);
void md_generated_free(md_generated* g);

const md_puzzle* md_generated_puzzle(const md_generated* g); /* borrowed */
const char* md_generated_witness(const md_generated* g);     /* borrowed */
int md_generated_obstacles(const md_generated* g);

/* ---- benchmarking ------------------------------------------------------ */

typedef struct md_bench_config md_bench_config;
typedef struct md_bench_result md_bench_result;

md_bench_config* md_bench_config_new(void);
void md_bench_config_free(md_bench_config* cfg);

md_status md_bench_config_add_size(md_bench_config* cfg, int rows, int cols, int obstacles);
/* name as in md_solve, plus "sat-internal" as an alias for "sat". */
md_status md_bench_config_add_solver(md_bench_config* cfg, const char* name);
md_status md_bench_config_set_repeats(md_bench_config* cfg, int repeats);
md_status md_bench_config_set_timeout_ms(md_bench_config* cfg, int64_t timeout_ms);
md_status md_bench_config_set_seed(md_bench_config* cfg, uint64_t seed);
md_status md_bench_config_set_jobs(md_bench_config* cfg, int jobs);
md_status md_bench_config_set_mcts(md_bench_config* cfg, uint64_t iterations, double c);
md_status md_bench_config_set_sat_command(md_bench_config* cfg, const char* command);

md_status md_bench_run(const md_bench_config* cfg, md_bench_result** out);
void md_bench_result_free(md_bench_result* r);

size_t md_bench_result_count(const md_bench_result* r);
md_status md_bench_result_csv(const md_bench_result* r, char** out_text);
md_status md_bench_result_table(const md_bench_result* r, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* MAZEDASH_H */
