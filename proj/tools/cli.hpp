#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gstk::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kDomain = 3,
};

/// Runs one command line (args exclude the program name). Human-readable
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gstk::cli
