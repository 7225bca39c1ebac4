#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mazedash/mcts.hpp"
#include "mazedash/result.hpp"

namespace mazedash {

enum class SolverKind { Backtrack, Mcts, SatInternal, SatExternal };

const char* to_string(SolverKind kind);
// Accepts "backtrack", "mcts", "sat-internal" (alias "sat"), "sat-external".
std::optional<SolverKind> solver_kind_from_string(std::string_view name);

struct BenchSize {
    int rows = 0;
    int cols = 0;
    int target_obstacles = 0;
};

struct BenchConfig {
    std::vector<BenchSize> sizes;
    std::vector<SolverKind> solvers;
    int repeats = 1;
    std::optional<std::int64_t> timeout_ms;  // per trial
    std::uint64_t base_seed = 0;
    int jobs = 1;
    // solver knobs
    std::uint64_t mcts_iterations = std::numeric_limits<std::uint64_t>::max();
    double mcts_c = std::numbers::sqrt2;
    std::string sat_command;  // required when solvers contains SatExternal
};

// One row per (instance, solver, trial); the obstacles column is the
// instance's actual obstacle count, not the target.
struct BenchRecord {
    int rows = 0;
    int cols = 0;
    int obstacles = 0;
    SolverKind solver = SolverKind::Backtrack;
    int trial = 0;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::Unsolvable;
    std::int64_t runtime_ms = 0;
    std::uint64_t peak_tracked_bytes = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t rollout_steps = 0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

// Generates one instance per (size, trial) with seed = base_seed + trial,
// shares it across the configured solvers so comparisons are paired, and
// runs each solver under the per-trial timeout. Trials run in parallel when
// jobs > 1; output order is deterministic either way (ascending grid area,
// solvers in config order, then trial).
std::vector<BenchRecord> run_bench(const BenchConfig& config);

// Fixed header, fields in declaration order, comma separated.
std::string emit_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_csv(std::string_view text);

// Markdown table of per-(size, solver) means over solved trials; "Failed"
// where no trial solved.
std::string emit_table(std::span<const BenchRecord> records);

}  // namespace mazedash
