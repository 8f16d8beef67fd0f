#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace assoc::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInputError = 2,
  kBudgetExceeded = 3,
};

/// Runs the `assoc` command line. `args` excludes the program name. Reads
/// stdin only when `compute` is given no --input (or --input -).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace assoc::cli
