#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace windwoa::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kDataError = 3,
  kRuntimeFailure = 4,
};

/// Entry point for the `windwoa` tool. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace windwoa::cli
