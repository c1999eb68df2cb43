#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace embedlab::cli {

// Exit statuses are part of the tool's contract; scripts switch on them.
inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitFormat = 65;

struct CliEnvironment {
  std::optional<std::string> tol;  // value of EMBEDLAB_TOL, if set
  bool human_summary = false;      // one-line summary on stderr
};

/// Reads EMBEDLAB_TOL and checks whether stderr is a terminal.
CliEnvironment environment_from_process();

/// `args` excludes the program name. The JSON report goes to `out`,
/// diagnostics and the optional human summary to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace embedlab::cli
