#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bigsos {

enum ExitCode : int {
  kExitOk = 0,
  kExitSyntax = 1,
  kExitValidation = 2,
  kExitNonMonotone = 3,
  kExitNonConvergence = 4,
  kExitInternal = 5,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bigsos
