#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permbound::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // an inequality check, certificate cell or convergence test failed
  kInputError = 2,   // bad flags, unreadable or malformed input, guard violations
};

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permbound::cli
