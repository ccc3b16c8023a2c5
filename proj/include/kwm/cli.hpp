#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kwm {

enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitInconclusive = 2, kExitInputError = 3 };

/// Runs one kwm command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kwm
