#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simloc::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kOk = 0, kRuntimeError = 1, kConfigError = 2 };

/// Entry point shared by the `simloc` binary and the tests. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file; nothing is left behind on failure.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace simloc::cli
