#pragma once

#include <iosfwd>

namespace crnlap {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // precondition, solver or integration failure
  kExitInputError = 2,  // usage, file, parse or validation error
  kExitStrict = 3,      // numerical warnings promoted by --strict
};

/// Entry point of `crnlap`; writes results to `out` and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crnlap
