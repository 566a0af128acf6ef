#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdde::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,   // bad flags, invalid parameters, incommensurable delays
  kTruncated = 2,    // simulate: trajectory blew up; partial CSV still written
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdde::cli
