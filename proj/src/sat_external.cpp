#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>

#include "mazedash/process.hpp"
#include "mazedash/sat.hpp"

namespace mazedash {

CommandOutput run_command(const std::string& shell_command,
                          std::optional<std::int64_t> timeout_ms) {
    using Clock = std::chrono::steady_clock;
    CommandOutput result;

    int fds[2];
    if (pipe(fds) != 0) {
        result.launch_failed = true;
        return result;
    }
    const pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        result.launch_failed = true;
        return result;
    }
    if (pid == 0) {
        setpgid(0, 0);  // own process group so a timeout kill reaches children
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", shell_command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fds[1]);

    const auto deadline =
        timeout_ms ? std::optional(Clock::now() + std::chrono::milliseconds(*timeout_ms))
                   : std::nullopt;
    char buf[4096];
    for (;;) {
        int wait_ms = -1;
        if (deadline) {
            const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       *deadline - Clock::now())
                                       .count();
            if (remaining <= 0) {
                result.timed_out = true;
                kill(-pid, SIGKILL);
                break;
            }
            wait_ms = static_cast<int>(remaining);
        }
        struct pollfd pfd {fds[0], POLLIN, 0};
        const int pr = poll(&pfd, 1, wait_ms);
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (pr == 0) continue;  // re-check the deadline
        const ssize_t n = read(fds[0], buf, sizeof buf);
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (n == 0) break;  // EOF
        result.output.append(buf, static_cast<std::size_t>(n));
    }
    close(fds[0]);

    int status = 0;
    if (waitpid(pid, &status, 0) == pid) {
        if (WIFEXITED(status))
            result.exit_code = WEXITSTATUS(status);
        else if (WIFSIGNALED(status))
            result.exit_code = 128 + WTERMSIG(status);
    }
    // 126/127 are the shell's cannot-execute / not-found codes
    if (result.exit_code == 126 || result.exit_code == 127) result.launch_failed = true;
    return result;
}

namespace {

class TempFile {
public:
    explicit TempFile(const std::string& contents) {
        const char* dir = std::getenv("TMPDIR");
        std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/mazedash-XXXXXX.cnf";
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        fd_ = mkstemps(buf.data(), 4);
        if (fd_ < 0) throw std::runtime_error("cannot create temporary DIMACS file");
        path_.assign(buf.data());
        std::size_t written = 0;
        while (written < contents.size()) {
            const ssize_t n = write(fd_, contents.data() + written, contents.size() - written);
            if (n <= 0) {
                if (errno == EINTR) continue;
                throw std::runtime_error("cannot write temporary DIMACS file");
            }
            written += static_cast<std::size_t>(n);
        }
    }
    ~TempFile() {
        if (fd_ >= 0) close(fd_);
        if (!path_.empty()) unlink(path_.c_str());
    }
    const std::string& path() const { return path_; }

private:
    int fd_ = -1;
    std::string path_;
};

std::string substitute_file(const std::string& command_template, const std::string& path) {
    static constexpr std::string_view placeholder = "{file}";
    std::string cmd = command_template;
    std::size_t pos = cmd.find(placeholder);
    if (pos == std::string::npos)
        throw std::invalid_argument("solver command template has no {file} placeholder");
    while (pos != std::string::npos) {
        cmd.replace(pos, placeholder.size(), path);
        pos = cmd.find(placeholder, pos + path.size());
    }
    return cmd;
}

}  // namespace

SatResult solve_sat_external(const CnfFormula& formula, const std::string& command_template,
                             std::optional<std::int64_t> timeout_ms) {
    TempFile dimacs(emit_dimacs(formula));
    const std::string cmd = substitute_file(command_template, dimacs.path());
    const CommandOutput run = run_command(cmd, timeout_ms);
    if (run.timed_out) return SatResult::unknown("timeout");
    if (run.launch_failed) return SatResult::unknown("launch failure");

    bool saw_sat = false, saw_unsat = false;
    std::vector<std::int32_t> lits;
    std::size_t pos = 0;
    while (pos <= run.output.size()) {
        std::size_t nl = run.output.find('\n', pos);
        std::string_view line = nl == std::string::npos
                                    ? std::string_view(run.output).substr(pos)
                                    : std::string_view(run.output).substr(pos, nl - pos);
        pos = nl == std::string::npos ? run.output.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.rfind("s ", 0) == 0) {
            std::string_view verdict = line.substr(2);
            if (verdict == "SATISFIABLE")
                saw_sat = true;
            else if (verdict == "UNSATISFIABLE")
                saw_unsat = true;
            else if (verdict != "UNKNOWN")
                return SatResult::unknown("unrecognized status line: " + std::string(line));
        } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
            std::size_t i = 1;
            while (i < line.size()) {
                while (i < line.size() && line[i] == ' ') ++i;
                if (i >= line.size()) break;
                std::size_t end = i;
                while (end < line.size() && line[end] != ' ') ++end;
                try {
                    lits.push_back(std::stoi(std::string(line.substr(i, end - i))));
                } catch (const std::exception&) {
                    return SatResult::unknown("bad literal in model line");
                }
                i = end;
            }
        }
    }

    if (saw_sat && saw_unsat) return SatResult::unknown("contradictory status lines");
    if (saw_unsat) return SatResult::unsat(0);
    if (!saw_sat) {
        return SatResult::unknown("no status line in solver output (exit code " +
                                  std::to_string(run.exit_code) + ")");
    }
    std::vector<std::uint8_t> assignment(formula.num_vars() + 1, 0);
    for (std::int32_t lit : lits) {
        if (lit == 0) continue;  // model terminator
        const int v = std::abs(lit);
        if (v <= formula.num_vars()) assignment[v] = lit > 0;
    }
    if (!satisfies(formula, assignment))
        return SatResult::unknown("reported model does not satisfy the formula");
    return SatResult::sat(std::move(assignment), 0);
}

SolveResult solve_sat_external_cmd(const Puzzle& puzzle, const std::string& command_template,
                                   const SearchLimits& limits) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    SolveResult result;
    auto finish = [&](SolveStatus status) {
        result.status = status;
        result.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        return result;
    };

    EncodedPuzzle enc = encode_cnf(puzzle);
    result.peak_tracked_bytes = static_cast<std::uint64_t>(enc.formula.memory_bytes());
    SatResult sat = solve_sat_external(enc.formula, command_template, limits.timeout_ms);
    switch (sat.kind) {
        case SatResult::Kind::Unsat:
            return finish(SolveStatus::Unsolvable);
        case SatResult::Kind::Unknown:
            result.detail = sat.reason;
            return finish(sat.reason == "timeout" ? SolveStatus::LimitExceeded
                                                  : SolveStatus::Error);
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
