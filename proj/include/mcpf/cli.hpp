#pragma once

#include <ostream>

namespace mcpf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnsolvable = 2;
inline constexpr int kExitTimeout = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

// Subcommands: solve, bench, validate, oracle, instance, genmap.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcpf
