#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jtmc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

/// Runs one command line (args excludes the program name). Diagnostics go
/// to `err`, informational output to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jtmc::cli
