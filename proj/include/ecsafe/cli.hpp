#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ecsafe {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNoResult = 1,       // search or attack gave up (budget, cap, interval)
  kExitFail = 2,           // a required criterion failed
  kExitIndeterminate = 3,  // no required failure, but some required criterion undecided
  kExitUsage = 64,
  kExitFile = 66,
  kExitInternal = 70,
};

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecsafe
