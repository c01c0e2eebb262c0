#pragma once

#include <iosfwd>

namespace croissant::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `croissant` tool: generate, chart, matrix, simulate,
/// fit. Never throws; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace croissant::cli
