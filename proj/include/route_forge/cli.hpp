#pragma once

#include <iosfwd>

namespace route_forge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // no solution, or violations found
inline constexpr int kExitUsage = 2;

/// Entry point of the route_forge tool: generate, solve, cluster, bench,
/// validate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace route_forge::cli
