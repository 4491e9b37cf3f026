#pragma once

// The `mrg` command line: one binary, one subcommand per analysis.

#include <iosfwd>
#include <string>
#include <vector>

#include "mrg/error.hpp"

namespace mrg::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,         // numerical failure, bad argument, unsupported graph
  kParse = 2,           // unreadable or missing file, bad command line
  kInvalidMap = 3,      // malformed graph or inconsistent map
  kAttribution = 4,     // attribution does not match the graph
  kOracleMismatch = 5,  // oracle-check found a mismatch
  kDivergent = 6,       // classify --fail-on-divergent found a divergent node
};

int exit_code(ErrorKind kind);

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrg::cli
