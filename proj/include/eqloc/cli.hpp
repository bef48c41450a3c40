#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eqloc::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kInputError = 2,
  kBudgetError = 3,
  kInfeasibleTarget = 4,
};

/// Default walking speed used to turn minute targets into meters.
inline constexpr double kDefaultWalkSpeedMPerMin = 80.0;

/// Runs one subcommand (ede, locate, target, synth, rank). `args` excludes the
/// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqloc::cli
