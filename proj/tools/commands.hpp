#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relevant/error.hpp"

namespace relevant::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// 1 for failures while doing the work (I/O, divergence), 2 for bad input or
/// configuration.
int exit_code_for(ErrorKind kind) noexcept;

/// Parses `args` (without the program name), runs the subcommand and returns
/// the process exit code. Reports go to `out`, logs and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relevant::cli
