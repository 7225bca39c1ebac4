#include "mazedash/sat.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

namespace mazedash {

VarMap::VarMap(const Puzzle& puzzle) : rows_(puzzle.rows()), cols_(puzzle.cols()) {
    index_.assign(static_cast<std::size_t>(rows_) * cols_, -1);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            Coord here{r, c};
            if (!puzzle.is_obstacle(here)) {
                index_[puzzle.index_of(here)] = static_cast<std::int32_t>(cells_.size());
                cells_.push_back(here);
            }
        }
    }
    steps_ = static_cast<int>(cells_.size());
}

int VarMap::cell_index(Coord c) const {
    if (c.row < 0 || c.row >= rows_ || c.col < 0 || c.col >= cols_) return -1;
    return index_[static_cast<std::size_t>(c.row) * cols_ + c.col];
}

void CnfFormula::add_clause(std::span<const std::int32_t> lits) {
    assert(!lits.empty());
    for (std::int32_t lit : lits) {
        assert(lit != 0 && std::abs(lit) <= num_vars_);
        pool_.push_back(lit);
    }
    start_.push_back(static_cast<std::uint32_t>(pool_.size()));
}

EncodedPuzzle encode_cnf(const Puzzle& puzzle) {
    VarMap vm(puzzle);
    const int T = vm.steps();
    CnfFormula f;
    f.set_num_vars(vm.num_vars());

    std::vector<std::int32_t> buf;
    buf.reserve(T + 3);

    // (a) the path starts at S
    f.add_clause({vm.var(0, vm.cell_index(puzzle.start()))});

    // (b) exactly one cell per step, (c) exactly one step per cell;
    // both as at-least-one plus pairwise at-most-one.
    std::size_t exactly_one_clauses = 0;
    for (int t = 0; t < T; ++t) {
        buf.clear();
        for (int c = 0; c < T; ++c) buf.push_back(vm.var(t, c));
        f.add_clause(buf);
        ++exactly_one_clauses;
        for (int c = 0; c < T; ++c) {
            for (int c2 = c + 1; c2 < T; ++c2) {
                f.add_clause({-vm.var(t, c), -vm.var(t, c2)});
                ++exactly_one_clauses;
            }
        }
    }
    for (int c = 0; c < T; ++c) {
        buf.clear();
        for (int t = 0; t < T; ++t) buf.push_back(vm.var(t, c));
        f.add_clause(buf);
        ++exactly_one_clauses;
        for (int t = 0; t < T; ++t) {
            for (int t2 = t + 1; t2 < T; ++t2) {
                f.add_clause({-vm.var(t, c), -vm.var(t2, c)});
                ++exactly_one_clauses;
            }
        }
    }
    // Closed-form count of the exactly-one families; miscounting here would
    // silently corrupt the encoding.
    assert(exactly_one_clauses ==
           2 * static_cast<std::size_t>(T) *
               (1 + static_cast<std::size_t>(T) * (T - 1) / 2));
    (void)exactly_one_clauses;

    // (d) consecutive steps are orthogonal free neighbors
    for (int t = 0; t + 1 < T; ++t) {
        for (int c = 0; c < T; ++c) {
            buf.clear();
            buf.push_back(-vm.var(t, c));
            const Coord at = vm.cell_coord(c);
            for (Direction d : kDirections) {
                const int n = vm.cell_index({at.row + row_delta(d), at.col + col_delta(d)});
                if (n >= 0) buf.push_back(vm.var(t + 1, n));
            }
            f.add_clause(buf);
        }
    }

    // (e) forced straight: having arrived at `c` from `prev` (direction d),
    // the path continues to `ahead` unless `ahead` is blocked (no clause) or
    // was already visited at some step 0..t-1.
    for (int t = 1; t + 1 < T; ++t) {
        for (int c = 0; c < T; ++c) {
            const Coord at = vm.cell_coord(c);
            for (Direction d : kDirections) {
                const int prev =
                    vm.cell_index({at.row - row_delta(d), at.col - col_delta(d)});
                const int ahead =
                    vm.cell_index({at.row + row_delta(d), at.col + col_delta(d)});
                if (prev < 0 || ahead < 0) continue;
                buf.clear();
                buf.push_back(-vm.var(t - 1, prev));
                buf.push_back(-vm.var(t, c));
                buf.push_back(vm.var(t + 1, ahead));
                for (int j = 0; j < t; ++j) buf.push_back(vm.var(j, ahead));
                f.add_clause(buf);
            }
        }
    }

    return {std::move(f), std::move(vm)};
}

std::string emit_dimacs(const CnfFormula& formula) {
    std::string out = "p cnf " + std::to_string(formula.num_vars()) + " " +
                      std::to_string(formula.clause_count()) + "\n";
    out.reserve(out.size() + formula.literal_count() * 4);
    for (std::size_t i = 0; i < formula.clause_count(); ++i) {
        for (std::int32_t lit : formula.clause(i)) {
            out += std::to_string(lit);
            out.push_back(' ');
        }
        out += "0\n";
    }
    return out;
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    bool have_header = false;
    std::size_t declared_clauses = 0;
    std::vector<std::int32_t> current;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        std::size_t i = 0;
        auto skip_ws = [&] { while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i; };
        skip_ws();
        if (i >= line.size() || line[i] == 'c') continue;
        if (line[i] == 'p') {
            if (have_header) throw DimacsParseError("duplicate header at line " + std::to_string(line_no));
            int vars = 0;
            unsigned long clauses = 0;
            char fmt[4] = {};
            if (std::sscanf(std::string(line).c_str(), "p %3s %d %lu", fmt, &vars, &clauses) != 3 ||
                std::string_view(fmt) != "cnf" || vars < 0)
                throw DimacsParseError("bad problem line at line " + std::to_string(line_no));
            f.set_num_vars(vars);
            declared_clauses = clauses;
            have_header = true;
            continue;
        }
        if (!have_header)
            throw DimacsParseError("clause before header at line " + std::to_string(line_no));
        while (i < line.size()) {
            skip_ws();
            if (i >= line.size()) break;
            std::int32_t lit = 0;
            auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), lit);
            if (ec != std::errc())
                throw DimacsParseError("bad literal at line " + std::to_string(line_no));
            i = static_cast<std::size_t>(ptr - line.data());
            if (lit == 0) {
                if (current.empty())
                    throw DimacsParseError("empty clause at line " + std::to_string(line_no));
                f.add_clause(current);
                current.clear();
            } else {
                if (std::abs(lit) > f.num_vars())
                    throw DimacsParseError("literal out of range at line " + std::to_string(line_no));
                current.push_back(lit);
            }
        }
    }
    if (!have_header) throw DimacsParseError("missing problem line");
    if (!current.empty()) throw DimacsParseError("unterminated clause at end of input");
    if (declared_clauses != f.clause_count())
        throw DimacsParseError("clause count mismatch: header says " +
                               std::to_string(declared_clauses) + ", found " +
                               std::to_string(f.clause_count()));
    return f;
}

bool satisfies(const CnfFormula& formula, std::span<const std::uint8_t> assignment) {
    for (std::size_t i = 0; i < formula.clause_count(); ++i) {
        bool sat = false;
        for (std::int32_t lit : formula.clause(i)) {
            const std::size_t v = static_cast<std::size_t>(std::abs(lit));
            if (v >= assignment.size()) return false;
            if ((lit > 0) == (assignment[v] != 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

namespace {

// Counter-based DPLL engine. Per clause we track the number of true and
// false literals; per literal we track how many not-yet-satisfied clauses
// contain it (the pure-literal counts). All updates are reversed on
// backtracking via the trail.
class Dpll {
public:
    Dpll(const CnfFormula& formula, MemoryMeter* meter)
        : f_(formula),
          n_(formula.num_vars()),
          occ_start_(meter),
          occ_(meter),
          num_true_(meter),
          num_false_(meter),
          active_(meter),
          value_(meter),
          trail_(meter),
          pure_queue_(meter) {
        const std::size_t lit_slots = 2 * static_cast<std::size_t>(n_) + 2;
        // occurrence lists in CSR form
        occ_start_.resize(lit_slots + 1, 0);
        for (std::size_t ci = 0; ci < f_.clause_count(); ++ci)
            for (std::int32_t lit : f_.clause(ci)) ++occ_start_[lit_index(lit) + 1];
        for (std::size_t i = 1; i < occ_start_.size(); ++i) occ_start_[i] += occ_start_[i - 1];
        occ_.resize(f_.literal_count(), 0);
        {
            std::vector<std::uint32_t> fill(lit_slots, 0);
            for (std::size_t ci = 0; ci < f_.clause_count(); ++ci)
                for (std::int32_t lit : f_.clause(ci)) {
                    const std::size_t li = lit_index(lit);
                    occ_[occ_start_[li] + fill[li]++] = static_cast<std::uint32_t>(ci);
                }
        }
        num_true_.resize(f_.clause_count(), 0);
        num_false_.resize(f_.clause_count(), 0);
        active_.resize(lit_slots, 0);
        for (std::size_t li = 0; li < lit_slots; ++li)
            active_[li] = static_cast<std::int32_t>(occ_start_[li + 1] - occ_start_[li]);
        value_.resize(n_ + 1, 0);
        trail_.reserve(n_);
        // variables that are one-sided from the start
        for (int v = 1; v <= n_; ++v)
            if (active_[lit_index(v)] == 0 || active_[lit_index(-v)] == 0) pure_queue_.push_back(v);
    }

    SatResult solve(const DpllLimits& limits) {
        using Clock = std::chrono::steady_clock;
        const auto deadline = limits.timeout_ms
                                  ? std::optional(Clock::now() + std::chrono::milliseconds(
                                                                     *limits.timeout_ms))
                                  : std::nullopt;

        // clauses that are unit at construction
        for (std::size_t ci = 0; ci < f_.clause_count(); ++ci) {
            if (f_.clause(ci).size() == 1 && !enqueue(f_.clause(ci)[0]))
                return SatResult::unsat(decisions_);
        }

        struct Decision {
            std::int32_t var;
            std::uint32_t trail_pos;
            bool flipped;
        };
        std::vector<Decision> decisions;
        int cursor = 1;  // lowest possibly-unassigned variable

        for (;;) {
            if (deadline && (steps_ & 0xFFF) == 0 && Clock::now() >= *deadline)
                return SatResult::unknown("timeout");
            ++steps_;

            if (!propagate()) {
                // conflict: chronological backtracking, true was tried first
                for (;;) {
                    if (decisions.empty()) return SatResult::unsat(decisions_);
                    Decision& d = decisions.back();
                    undo_to(d.trail_pos, cursor);
                    if (!d.flipped) {
                        d.flipped = true;
                        enqueue(-d.var);
                        break;
                    }
                    decisions.pop_back();
                }
                continue;
            }

            while (cursor <= n_ && value_[cursor] != 0) ++cursor;
            if (cursor > n_) {
                std::vector<std::uint8_t> model(n_ + 1, 0);
                for (int v = 1; v <= n_; ++v) model[v] = value_[v] > 0;
                if (!satisfies(f_, model))
                    return SatResult::unknown("internal error: model check failed");
                return SatResult::sat(std::move(model), decisions_);
            }
            ++decisions_;
            if (limits.max_decisions && decisions_ > *limits.max_decisions)
                return SatResult::unknown("decision limit");
            decisions.push_back({cursor, static_cast<std::uint32_t>(trail_.size()), false});
            enqueue(cursor);
        }
    }

private:
    static std::size_t lit_index(std::int32_t lit) {
        return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0);
    }

    bool enqueue(std::int32_t lit) {
        const int v = std::abs(lit);
        const std::int8_t want = lit > 0 ? 1 : -1;
        if (value_[v] != 0) return value_[v] == want;
        value_[v] = want;
        trail_.push_back(lit);
        return true;
    }

    // Unit propagation and pure-literal assignment to fixpoint.
    // Returns false on conflict. Counter updates for a trail literal are
    // always applied in full before reporting a conflict, so undo_to can
    // treat the processed prefix [0, qhead_) uniformly.
    bool propagate() {
        for (;;) {
            while (qhead_ < trail_.size()) {
                const std::int32_t lit = trail_[qhead_++];
                bool conflict = false;
                // clauses satisfied by lit
                const std::size_t li = lit_index(lit);
                for (std::uint32_t k = occ_start_[li]; k < occ_start_[li + 1]; ++k) {
                    const std::uint32_t ci = occ_[k];
                    if (num_true_[ci]++ == 0) on_satisfied(ci);
                }
                // clauses losing the negated literal
                const std::size_t nli = lit_index(-lit);
                for (std::uint32_t k = occ_start_[nli]; k < occ_start_[nli + 1]; ++k) {
                    const std::uint32_t ci = occ_[k];
                    ++num_false_[ci];
                    if (conflict || num_true_[ci] != 0) continue;
                    const auto clause = f_.clause(ci);
                    const std::int32_t remaining =
                        static_cast<std::int32_t>(clause.size()) - num_false_[ci];
                    if (remaining == 0) {
                        conflict = true;
                    } else if (remaining == 1) {
                        for (std::int32_t u : clause) {
                            if (value_[std::abs(u)] == 0) {
                                enqueue(u);  // cannot fail: u is unassigned
                                break;
                            }
                        }
                    }
                }
                if (conflict) return false;
            }
            // pure literals discovered since the last pass
            bool assigned = false;
            while (!pure_queue_.empty()) {
                const int v = pure_queue_.back();
                pure_queue_.pop_back();
                if (value_[v] != 0) continue;
                const bool pos_dead = active_[lit_index(v)] == 0;
                const bool neg_dead = active_[lit_index(-v)] == 0;
                if (neg_dead) {
                    enqueue(v);  // also covers the fully unconstrained case
                    assigned = true;
                    break;
                }
                if (pos_dead) {
                    enqueue(-v);
                    assigned = true;
                    break;
                }
            }
            if (!assigned && qhead_ == trail_.size()) return true;
        }
    }

    void on_satisfied(std::uint32_t ci) {
        for (std::int32_t lit : f_.clause(ci)) {
            if (--active_[lit_index(lit)] == 0 && value_[std::abs(lit)] == 0)
                pure_queue_.push_back(std::abs(lit));
        }
    }

    void on_unsatisfied(std::uint32_t ci) {
        for (std::int32_t lit : f_.clause(ci)) ++active_[lit_index(lit)];
    }

    void undo_to(std::uint32_t pos, int& cursor) {
        while (trail_.size() > pos) {
            const std::int32_t lit = trail_.back();
            trail_.pop_back();
            // Entries at or beyond qhead_ were enqueued but never counted;
            // only their value needs clearing.
            if (trail_.size() < qhead_) {
                const std::size_t li = lit_index(lit);
                for (std::uint32_t k = occ_start_[li]; k < occ_start_[li + 1]; ++k) {
                    const std::uint32_t ci = occ_[k];
                    if (--num_true_[ci] == 0) on_unsatisfied(ci);
                }
                const std::size_t nli = lit_index(-lit);
                for (std::uint32_t k = occ_start_[nli]; k < occ_start_[nli + 1]; ++k)
                    --num_false_[occ_[k]];
                qhead_ = trail_.size();
            }
            const int v = std::abs(lit);
            value_[v] = 0;
            if (v < cursor) cursor = v;
        }
        if (qhead_ > trail_.size()) qhead_ = trail_.size();
        pure_queue_.clear();  // stale candidates; counts were restored above
    }

    const CnfFormula& f_;
    int n_;
    TrackedVec<std::uint32_t> occ_start_;
    TrackedVec<std::uint32_t> occ_;
    TrackedVec<std::int32_t> num_true_;
    TrackedVec<std::int32_t> num_false_;
    TrackedVec<std::int32_t> active_;
    TrackedVec<std::int8_t> value_;
    TrackedVec<std::int32_t> trail_;
    TrackedVec<std::int32_t> pure_queue_;
    std::size_t qhead_ = 0;
    std::uint64_t decisions_ = 0;
    std::uint64_t steps_ = 0;
};

}  // namespace

SatResult solve_sat_internal(const CnfFormula& formula, const DpllLimits& limits,
                             MemoryMeter* meter) {
    Dpll solver(formula, meter);
    return solver.solve(limits);
}

std::vector<Direction> decode_model(std::span<const std::uint8_t> assignment, const VarMap& vars,
                                    const Puzzle& puzzle) {
    const int T = vars.steps();
    std::vector<Coord> cells(T);
    for (int t = 0; t < T; ++t) {
        int found = -1;
        for (int c = 0; c < T; ++c) {
            const std::size_t v = static_cast<std::size_t>(vars.var(t, c));
            if (v < assignment.size() && assignment[v]) {
                if (found >= 0)
                    throw MalformedModelError("two cells assigned at step " + std::to_string(t));
                found = c;
            }
        }
        if (found < 0)
            throw MalformedModelError("no cell assigned at step " + std::to_string(t));
        cells[t] = vars.cell_coord(found);
    }
    (void)puzzle;

    std::vector<Direction> moves;
    std::optional<Direction> current;
    for (int t = 0; t + 1 < T; ++t) {
        const int dr = cells[t + 1].row - cells[t].row;
        const int dc = cells[t + 1].col - cells[t].col;
        std::optional<Direction> step;
        for (Direction d : kDirections)
            if (row_delta(d) == dr && col_delta(d) == dc) step = d;
        if (!step)
            throw MalformedModelError("steps " + std::to_string(t) + " and " +
                                      std::to_string(t + 1) + " are not adjacent");
        if (!current || *current != *step) {
            moves.push_back(*step);
            current = *step;
        }
    }
    return moves;
}

SolveResult solve_sat(const Puzzle& puzzle, const SearchLimits& limits) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    MemoryMeter meter;
    SolveResult result;
    auto finish = [&](SolveStatus status) {
        result.status = status;
        result.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        result.peak_tracked_bytes = static_cast<std::uint64_t>(meter.peak());
        return result;
    };

    EncodedPuzzle enc = encode_cnf(puzzle);
    meter.add(static_cast<std::int64_t>(enc.formula.memory_bytes()));

    DpllLimits dl;
    dl.max_decisions = limits.max_nodes;
    if (limits.timeout_ms) {
        const auto spent =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        if (spent >= *limits.timeout_ms) {
            meter.sub(static_cast<std::int64_t>(enc.formula.memory_bytes()));
            return finish(SolveStatus::LimitExceeded);
        }
        dl.timeout_ms = *limits.timeout_ms - spent;
    }

    SatResult sat = solve_sat_internal(enc.formula, dl, &meter);
    meter.sub(static_cast<std::int64_t>(enc.formula.memory_bytes()));
    result.nodes_expanded = sat.decisions;
    switch (sat.kind) {
        case SatResult::Kind::Unsat:
            return finish(SolveStatus::Unsolvable);
        case SatResult::Kind::Unknown:
            result.detail = sat.reason;
            return finish(SolveStatus::LimitExceeded);
        case SatResult::Kind::Sat: {
            result.moves = decode_model(sat.assignment, enc.vars, puzzle);
            if (!verify_solution(puzzle, result.moves).valid())
                throw std::logic_error("SAT model decoded to an invalid solution");
            return finish(SolveStatus::Solved);
        }
    }
    return finish(SolveStatus::Error);
}

}  // namespace mazedash
