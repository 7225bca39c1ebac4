#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mazedash {

struct CommandOutput {
    int exit_code = -1;
    bool launch_failed = false;
    bool timed_out = false;
    std::string output;  // captured stdout
};

// Runs a command through /bin/sh, capturing stdout. On timeout the process
// group is killed and timed_out is set. stderr is inherited.
CommandOutput run_command(const std::string& shell_command,
                          std::optional<std::int64_t> timeout_ms = {});

}  // namespace mazedash
