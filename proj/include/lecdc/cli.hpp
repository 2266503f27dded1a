#pragma once

#include <iosfwd>

namespace lecdc::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kUsage = 2,     // bad arguments or unreadable input
    kNotSolved = 3, // infeasible or stopped at a limit
    kEnvironment = 4,
};

/// Runs the command line. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lecdc::cli
