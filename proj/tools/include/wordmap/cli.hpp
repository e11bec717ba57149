#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wordmap::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kData = 2,
    kNumerical = 3,
};

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wordmap::cli
