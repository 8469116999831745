#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace macgof::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kNumericalError = 3,
};

/// Name of the environment variable holding the default null-cache directory.
inline constexpr const char* kCacheDirEnv = "MACGOF_CACHE_DIR";

/**
 * @brief Entry point of the command-line tool.
 *
 * `args` excludes the program name. Reports go to the --out file or to `out`;
 * diagnostics go to `err`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace macgof::cli
