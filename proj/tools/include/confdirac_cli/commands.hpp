#pragma once

#include "confdirac_cli/config.hpp"
#include "confdirac_cli/record.hpp"

namespace confdirac::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitNearKernel = 3,
  kExitNumerical = 4,
};

ResultRecord cmd_spectrum(const RunConfig& config);
ResultRecord cmd_sweep(const RunConfig& config);
ResultRecord cmd_mass(const RunConfig& config);
ResultRecord cmd_minimize(const RunConfig& config);
/// Reduced-size run of every command.
ResultRecord cmd_selfcheck(const RunConfig& config);

/// Validates, dispatches and converts library errors into a record with
/// text.status and the matching exit code.
struct RunOutcome {
  ResultRecord record;
  int exit_code = kExitPass;
};
RunOutcome run(const RunConfig& config);

}  // namespace confdirac::cli
