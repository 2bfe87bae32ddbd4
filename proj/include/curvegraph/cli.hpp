#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvegraph {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Output is
/// buffered and written to `out` / `err` only once the command finishes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvegraph
