#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsemplus::cli {

enum ExitCode : int { success = 0, runtime_failure = 1, usage_error = 2 };

/// Runs the command line front end. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsemplus::cli
