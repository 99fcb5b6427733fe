#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lieavg::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDiverged = 2 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lieavg::cli
