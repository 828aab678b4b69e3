#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcmlead::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kInvariantViolation = 3,
  kDomainError = 4,
};

/// Runs `pcmlead <args...>` (args excludes the program name). Data and
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pcmlead::cli
