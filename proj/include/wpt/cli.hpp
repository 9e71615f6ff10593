#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wpt::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs one command line (args exclude the program name). Results go to
/// `out` or to files under --out-dir; diagnostics go to `err`, each failure
/// as one line starting with `error: <kind>:`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wpt::cli
