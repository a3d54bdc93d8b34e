#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pulsegate::cli {

/// Stable exit codes for scripting.
enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kSolverError = 3,
  kNoPeak = 4,
};

/// Runs one command line (args excludes the program name). Subcommands:
/// respond, sweep, peak, modes. Output files are written atomically.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pulsegate::cli
