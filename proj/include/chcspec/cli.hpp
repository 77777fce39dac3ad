#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chcspec {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,  // bad flags, unreadable or malformed input, budget exhausted
  kExitInternal = 2,    // broken invariant inside the library
  kExitNotEquivalent = 3,  // oracle compare found a difference
};

/// Runs the tool on argv[1..] (without the program name). Outputs that are
/// not redirected to a file go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chcspec
