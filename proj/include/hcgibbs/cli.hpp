#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcgibbs::cli {

enum ExitCode : int { kSuccess = 0, kReproduceFail = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Runs the command line (args excludes the program name). Output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcgibbs::cli
