#pragma once

#include <string>
#include <vector>

namespace ergodic_mlmc::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

/// Parses argv, dispatches the subcommand and returns the process exit code.
/// Messages go to stderr; CSV reports go to the output directory.
int run_cli(const std::vector<std::string>& args);

}  // namespace ergodic_mlmc::cli
