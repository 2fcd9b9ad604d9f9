#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phonograph::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kIo = 3,
};

/// Runs one subcommand. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phonograph::cli
