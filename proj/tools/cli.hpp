#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace crlab::cli {

enum ExitCode { kPass = 0, kUsage = 1, kGateFailure = 2 };

/// Runs one batch command. `args` excludes the program name. Progress and
/// diagnostics go to `out` and `err`; reports go to the output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crlab::cli
