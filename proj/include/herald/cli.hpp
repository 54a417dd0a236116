#ifndef HERALD_CLI_HPP
#define HERALD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace herald {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitInfeasible = 3 };

/// Runs the command line `args` (without the program name), writing reports
/// to `out` and diagnostics to `err`. Returns one of ExitCode.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace herald

#endif  // HERALD_CLI_HPP
