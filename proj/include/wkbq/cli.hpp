#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wkbq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;

/// Entry point of the `wkbq` tool. Subcommands: spectrum, compare, sweep,
/// oracle, delta1. Reports go to `out` (or --output), diagnostics to `err`.
/// Returns 0 on success, 1 on a configuration error, 2 when some rows failed.
int run_cli(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

/// Same, with args[0] the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wkbq
