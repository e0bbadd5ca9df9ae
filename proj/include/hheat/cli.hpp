#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hheat {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitInvalidInput = 2,
    kExitSolverFailed = 3,
};

/// Entry point behind the hheat executable: subcommands steady, sweep and validate.
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hheat
