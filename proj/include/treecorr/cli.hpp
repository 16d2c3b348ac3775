#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;        // bad flags, failed preconditions, unreadable input
inline constexpr int kExitCheckFailed = 2;  // a verification check did not hold

// Runs one subcommand. `args` excludes the program name. Reports go to `out`
// (or to --output when given), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treecorr::cli
