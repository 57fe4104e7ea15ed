#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hypdc::cli {

enum ExitCode : int {
  kOk = 0,
  kViolations = 1,
  kInputError = 2,
  kNonConvergence = 3,
};

// Runs one invocation. args excludes the program name. Reports go to `out`,
// one-line JSON diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypdc::cli
