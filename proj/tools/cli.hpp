#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastrcs::cli {

enum ExitCode : int {
    kOk = 0,
    kBadFlags = 2,
    kBadInput = 3,
    kNumericalFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fastrcs::cli
