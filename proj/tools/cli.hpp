#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conjparse::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kDataError = 3,
  kModelError = 4,
  kInternalError = 70,
};

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conjparse::cli
