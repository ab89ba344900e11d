#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace canonsys {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name) and runs one subcommand. Normal
/// output goes to `out` unless --output names a file; diagnostics go to `err`,
/// domain errors as a one-line JSON object {"error": kind, "message": text}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace canonsys
