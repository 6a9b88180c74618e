#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cfp::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kHypothesisViolated = 2,
    kDivergence = 3,
};

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfp::cli
