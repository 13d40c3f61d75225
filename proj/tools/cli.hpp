#pragma once

#include <iosfwd>

namespace deltadiv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line tool. Exit codes: 0 success, 1 computation or
/// validation failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deltadiv::cli
