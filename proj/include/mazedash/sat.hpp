#pragma once

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mazedash/memory.hpp"
#include "mazedash/result.hpp"

namespace mazedash {

// Bijection between CNF variables and (step, free-cell) pairs. Free cells
// are indexed row-major; variables are contiguous from 1 and there are
// exactly free_count^2 of them.
class VarMap {
public:
    explicit VarMap(const Puzzle& puzzle);

    int steps() const { return steps_; }  // = free_count
    int num_vars() const { return steps_ * steps_; }
    int var(int step, int cell) const { return step * steps_ + cell + 1; }
    int step_of(int var) const { return (var - 1) / steps_; }
    int cell_of(int var) const { return (var - 1) % steps_; }
    Coord cell_coord(int cell) const { return cells_[cell]; }
    // Free-cell index of a coordinate, -1 for obstacles/out of bounds.
    int cell_index(Coord c) const;

private:
    int steps_;
    int rows_, cols_;
    std::vector<Coord> cells_;
    std::vector<std::int32_t> index_;
};

// CNF container: flattened literal pool, positive literal = variable,
// negative = negation. Clauses are nonempty by construction.
class CnfFormula {
public:
    int num_vars() const { return num_vars_; }
    void set_num_vars(int n) { num_vars_ = n; }

    std::size_t clause_count() const { return start_.size() - 1; }
    std::span<const std::int32_t> clause(std::size_t i) const {
        return {pool_.data() + start_[i], start_[i + 1] - start_[i]};
    }
    std::size_t literal_count() const { return pool_.size(); }

    void add_clause(std::span<const std::int32_t> lits);
    void add_clause(std::initializer_list<std::int32_t> lits) {
        add_clause(std::span<const std::int32_t>(lits.begin(), lits.size()));
    }

    std::size_t memory_bytes() const {
        return pool_.capacity() * sizeof(std::int32_t) + start_.capacity() * sizeof(std::uint32_t);
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    int num_vars_ = 0;
    std::vector<std::int32_t> pool_;
    std::vector<std::uint32_t> start_ = {0};
};

struct EncodedPuzzle {
    CnfFormula formula;
    VarMap vars;
};

// Propositional encoding of the per-cell path model: start anchor,
// exactly-one cell per step, exactly-one step per cell (pairwise at-most-one
// throughout), step-to-step adjacency, and the forced-straight rule (a turn
// is only allowed when the straight-ahead cell is a wall, an obstacle, or
// was visited at an earlier step).
EncodedPuzzle encode_cnf(const Puzzle& puzzle);

std::string emit_dimacs(const CnfFormula& formula);

struct DimacsParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
CnfFormula parse_dimacs(std::string_view text);

struct SatResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    // Indexed by variable (entry 0 unused); meaningful when kind == Sat.
    std::vector<std::uint8_t> assignment;
    std::string reason;  // why Unknown
    std::uint64_t decisions = 0;

    static SatResult sat(std::vector<std::uint8_t> a, std::uint64_t decisions) {
        return {Kind::Sat, std::move(a), {}, decisions};
    }
    static SatResult unsat(std::uint64_t decisions) { return {Kind::Unsat, {}, {}, decisions}; }
    static SatResult unknown(std::string why) { return {Kind::Unknown, {}, std::move(why), 0}; }
};

bool satisfies(const CnfFormula& formula, std::span<const std::uint8_t> assignment);

struct DpllLimits {
    std::optional<std::int64_t> timeout_ms;
    std::optional<std::uint64_t> max_decisions;
};

// Complete DPLL: unit propagation, pure-literal elimination, branching on
// the lowest-index unassigned variable with true tried first, chronological
// backtracking. Returns Sat or Unsat when unbounded; Unknown only when a
// limit interrupts the search. Sat assignments are checked against every
// clause before being returned.
SatResult solve_sat_internal(const CnfFormula& formula, const DpllLimits& limits = {},
                             MemoryMeter* meter = nullptr);

struct MalformedModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recovers the per-step cell sequence from a model (exactly one true
// variable per step required) and compresses straight runs into slide moves.
std::vector<Direction> decode_model(std::span<const std::uint8_t> assignment, const VarMap& vars,
                                    const Puzzle& puzzle);

// Full internal pipeline: encode -> DPLL -> decode -> verify. The decoded
// path is verified on every run; a verification failure would mean the
// encoder is wrong and raises std::logic_error.
SolveResult solve_sat(const Puzzle& puzzle, const SearchLimits& limits = {});

// Writes DIMACS to a temporary file, substitutes it for "{file}" in the
// command template, runs the command through the shell and parses
// SAT-competition output ("s SATISFIABLE"/"s UNSATISFIABLE", "v " literal
// lines). Launch failures, malformed output and timeouts map to Unknown.
SatResult solve_sat_external(const CnfFormula& formula, const std::string& command_template,
                             std::optional<std::int64_t> timeout_ms = {});

SolveResult solve_sat_external_cmd(const Puzzle& puzzle, const std::string& command_template,
                                   const SearchLimits& limits = {});

}  // namespace mazedash
