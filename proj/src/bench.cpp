#include "mazedash/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "mazedash/backtrack.hpp"
#include "mazedash/generator.hpp"
#include "mazedash/sat.hpp"

namespace mazedash {

const char* to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Backtrack: return "backtrack";
        case SolverKind::Mcts: return "mcts";
        case SolverKind::SatInternal: return "sat-internal";
        case SolverKind::SatExternal: return "sat-external";
    }
    return "unknown";
}

std::optional<SolverKind> solver_kind_from_string(std::string_view name) {
    if (name == "backtrack") return SolverKind::Backtrack;
    if (name == "mcts") return SolverKind::Mcts;
    if (name == "sat" || name == "sat-internal") return SolverKind::SatInternal;
    if (name == "sat-external") return SolverKind::SatExternal;
    return std::nullopt;
}

namespace {

SolveResult run_solver(SolverKind kind, const Puzzle& puzzle, const BenchConfig& cfg,
                       std::uint64_t seed) {
    SearchLimits limits;
    limits.timeout_ms = cfg.timeout_ms;
    switch (kind) {
        case SolverKind::Backtrack:
            return solve_backtrack(puzzle, limits);
        case SolverKind::Mcts: {
            MctsConfig mc;
            mc.exploration_c = cfg.mcts_c;
            mc.max_iterations = cfg.mcts_iterations;
            mc.timeout_ms = cfg.timeout_ms;
            mc.seed = seed;
            return solve_mcts(puzzle, mc);
        }
        case SolverKind::SatInternal:
            return solve_sat(puzzle, limits);
        case SolverKind::SatExternal:
            return solve_sat_external_cmd(puzzle, cfg.sat_command, limits);
    }
    throw std::logic_error("unknown solver kind");
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
    if (config.sizes.empty() || config.solvers.empty())
        throw std::invalid_argument("bench needs at least one size and one solver");
    if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    const bool wants_external =
        std::find(config.solvers.begin(), config.solvers.end(), SolverKind::SatExternal) !=
        config.solvers.end();
    if (wants_external && config.sat_command.empty())
        throw std::invalid_argument("sat-external solver requires a command template");

    struct Unit {
        std::size_t size_index;
        int trial;
    };
    std::vector<Unit> units;
    units.reserve(config.sizes.size() * config.repeats);
    for (std::size_t s = 0; s < config.sizes.size(); ++s)
        for (int t = 0; t < config.repeats; ++t) units.push_back({s, t});

    const std::size_t per_unit = config.solvers.size();
    std::vector<BenchRecord> records(units.size() * per_unit);

    auto work = [&](const Unit& unit, BenchRecord* out) {
        const BenchSize& size = config.sizes[unit.size_index];
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(unit.trial);
        GenConfig gen;
        gen.rows = size.rows;
        gen.cols = size.cols;
        gen.target_obstacles = size.target_obstacles;
        gen.seed = seed;
        GeneratedInstance instance = generate_puzzle(gen);
        for (std::size_t k = 0; k < config.solvers.size(); ++k) {
            const SolverKind kind = config.solvers[k];
            const SolveResult r = run_solver(kind, instance.puzzle, config, seed);
            BenchRecord& rec = out[k];
            rec.rows = size.rows;
            rec.cols = size.cols;
            rec.obstacles = instance.actual_obstacles;
            rec.solver = kind;
            rec.trial = unit.trial;
            rec.seed = seed;
            rec.status = r.status;
            rec.runtime_ms = r.elapsed_ms;
            rec.peak_tracked_bytes = r.peak_tracked_bytes;
            rec.nodes_expanded = r.nodes_expanded;
            rec.rollout_steps = r.rollout_steps;
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t u = 0; u < units.size(); ++u) work(units[u], &records[u * per_unit]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t u = next.fetch_add(1);
                if (u >= units.size()) return;
                work(units[u], &records[u * per_unit]);
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(units.size()));
        pool.reserve(n);
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Deterministic report order regardless of scheduling.
    std::stable_sort(records.begin(), records.end(),
                     [&](const BenchRecord& a, const BenchRecord& b) {
                         const long area_a = static_cast<long>(a.rows) * a.cols;
                         const long area_b = static_cast<long>(b.rows) * b.cols;
                         if (area_a != area_b) return area_a < area_b;
                         if (a.rows != b.rows) return a.rows < b.rows;
                         auto pos = [&](SolverKind k) {
                             return std::find(config.solvers.begin(), config.solvers.end(), k) -
                                    config.solvers.begin();
                         };
                         if (pos(a.solver) != pos(b.solver)) return pos(a.solver) < pos(b.solver);
                         return a.trial < b.trial;
                     });
    return records;
}

std::string emit_csv(std::span<const BenchRecord> records) {
    std::string out =
        "rows,cols,obstacles,solver,trial,seed,status,runtime_ms,peak_tracked_bytes,"
        "nodes_expanded,rollout_steps\n";
    for (const BenchRecord& r : records) {
        char line[256];
        std::snprintf(line, sizeof line, "%d,%d,%d,%s,%d,%llu,%s,%lld,%llu,%llu,%llu\n", r.rows,
                      r.cols, r.obstacles, to_string(r.solver), r.trial,
                      static_cast<unsigned long long>(r.seed), to_string(r.status),
                      static_cast<long long>(r.runtime_ms),
                      static_cast<unsigned long long>(r.peak_tracked_bytes),
                      static_cast<unsigned long long>(r.nodes_expanded),
                      static_cast<unsigned long long>(r.rollout_steps));
        out += line;
    }
    return out;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
    std::vector<BenchRecord> records;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line.rfind("rows,", 0) != 0)
                throw std::runtime_error("bench csv: missing header");
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.emplace_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 11)
            throw std::runtime_error("bench csv: bad field count on line " +
                                     std::to_string(line_no));
        BenchRecord r;
        r.rows = std::stoi(fields[0]);
        r.cols = std::stoi(fields[1]);
        r.obstacles = std::stoi(fields[2]);
        const auto solver = solver_kind_from_string(fields[3]);
        if (!solver) throw std::runtime_error("bench csv: unknown solver " + fields[3]);
        r.solver = *solver;
        r.trial = std::stoi(fields[4]);
        r.seed = std::stoull(fields[5]);
        const auto status = solve_status_from_string(fields[6]);
        if (!status) throw std::runtime_error("bench csv: unknown status " + fields[6]);
        r.status = *status;
        r.runtime_ms = std::stoll(fields[7]);
        r.peak_tracked_bytes = std::stoull(fields[8]);
        r.nodes_expanded = std::stoull(fields[9]);
        r.rollout_steps = std::stoull(fields[10]);
        records.push_back(r);
    }
    return records;
}

std::string emit_table(std::span<const BenchRecord> records) {
    struct Agg {
        int rows = 0, cols = 0;
        SolverKind solver = SolverKind::Backtrack;
        long obstacle_sum = 0;
        int trials = 0;
        int solved = 0;
        double runtime_sum = 0;   // solved trials only
        double memory_sum = 0;    // solved trials only
    };
    std::vector<Agg> groups;
    auto find = [&](const BenchRecord& r) -> Agg& {
        for (Agg& g : groups)
            if (g.rows == r.rows && g.cols == r.cols && g.solver == r.solver) return g;
        groups.push_back({r.rows, r.cols, r.solver, 0, 0, 0, 0.0, 0.0});
        return groups.back();
    };
    for (const BenchRecord& r : records) {
        Agg& g = find(r);
        g.obstacle_sum += r.obstacles;
        g.trials += 1;
        if (r.status == SolveStatus::Solved) {
            g.solved += 1;
            g.runtime_sum += static_cast<double>(r.runtime_ms);
            g.memory_sum += static_cast<double>(r.peak_tracked_bytes);
        }
    }

    std::string out =
        "| Grid | Obstacles (mean) | Solver | Solved | Mean Run-Time (ms) | Mean Peak Tracked "
        "(KiB) |\n|---|---|---|---|---|---|\n";
    for (const Agg& g : groups) {
        char line[256];
        if (g.solved > 0) {
            std::snprintf(line, sizeof line, "| %dx%d | %.1f | %s | %d/%d | %.2f | %.1f |\n",
                          g.rows, g.cols, static_cast<double>(g.obstacle_sum) / g.trials,
                          to_string(g.solver), g.solved, g.trials, g.runtime_sum / g.solved,
                          g.memory_sum / g.solved / 1024.0);
        } else {
            std::snprintf(line, sizeof line, "| %dx%d | %.1f | %s | %d/%d | Failed | Failed |\n",
                          g.rows, g.cols, static_cast<double>(g.obstacle_sum) / g.trials,
                          to_string(g.solver), g.solved, g.trials);
        }
        out += line;
    }
    return out;
}

}  // namespace mazedash
