#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arqsched {

/// Process exit statuses of the command-line tool.
enum ExitStatus : int {
    kExitOk = 0,
    kExitInvalidInstance = 2,
    kExitCheckFailed = 3,
    kExitUsage = 4,
};

/// Runs one subcommand. `args` excludes the program name. JSON goes to `out`;
/// failures print {"error": CODE, "message": ...} to `out` and help text to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arqsched
