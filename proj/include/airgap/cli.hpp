#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace airgap::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace airgap::cli
