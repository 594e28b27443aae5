#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgematch {

/// Exit codes shared by every subcommand; `match` additionally returns
/// kExitReject when the images do not correspond.
inline constexpr int kExitOk = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitError = 2;

/// Runs the command line `args` (args[0] is the program name). Results that
/// are not written to --out go to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace edgematch
