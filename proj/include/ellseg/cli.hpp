#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellseg::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,       ///< unknown subcommand or bad arguments
    kUnreadable = 3,  ///< missing or unreadable input
    kSchema = 4,      ///< input readable but malformed
    kFailure = 5,     ///< anything else
};

/// Runs one subcommand. `args` excludes the program name. Errors are
/// reported as a single JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ellseg::cli
