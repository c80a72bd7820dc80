#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twotier::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kSizeLimit = 3 };

/// Runs the command line `args` (without the program name). Normal output goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace twotier::cli
