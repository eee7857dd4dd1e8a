#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mdrcli {

enum ExitCode : int {
  exit_ok = 0,
  exit_numerical = 1,
  exit_config = 2,
  exit_route_discrepancy = 3,
  exit_validation = 4,
  exit_verify = 5,
};

// Runs the command line `args` (without the program name), writing normal
// output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdrcli
