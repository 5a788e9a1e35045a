#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaininf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kInconsistentEvidence = 3,
  kSizeCap = 4,
};

/// Run the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaininf::cli
