#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ubern {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCounterexample = 1,
  kExitUsage = 2,
  kExitCache = 3,
};

/// Environment overrides: UBERN_CACHE_DIR and UBERN_N_CEILING.
struct CliEnvironment {
  std::optional<std::string> cache_dir;
  std::optional<std::string> n_ceiling;

  static CliEnvironment from_process();
};

/// Runs one invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace ubern
