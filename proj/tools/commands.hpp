#pragma once

#include <iosfwd>

#include "output.hpp"
#include "run_config.hpp"

namespace dqpt::cli {

enum ExitCode : int { kSuccess = 0, kToleranceFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

struct RunResult {
    int exit_code = kSuccess;
    std::string summary;  // one line per notable finding, printed to stdout
    OutputSet outputs;
};

/// Computes every output of a resolved, validated config in memory.
RunResult execute(const RunConfig& resolved);

/// resolve + validate + execute + commit, mapping failures to exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dqpt::cli
