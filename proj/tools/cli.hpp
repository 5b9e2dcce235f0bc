#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prefrules::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfigError = 2,
  kParseError = 3,
  kModelMismatch = 4,
};

/// Runs the command line `args` (args[0] is the program name). Rule files and
/// reports go to --output when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prefrules::cli
