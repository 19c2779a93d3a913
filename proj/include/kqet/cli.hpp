#pragma once

#include <iosfwd>

namespace kqet {

/// Exit codes of parse_and_dispatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCompute = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. Primary output goes to `out` unless --out names a
/// file; diagnostics go to `err`.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out,
                       std::ostream& err);

}  // namespace kqet
