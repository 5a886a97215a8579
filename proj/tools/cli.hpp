#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flc::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kCertificationAbort = 2 };

/// Runs the command line `args` (without the program name). Human-readable summaries go to
/// `out`, diagnostics to `err`. The result file goes to --out, or to `out` when absent.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flc::cli
