#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tropcert::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  Yes = 0,
  No = 1,
  Unknown = 2,
  Usage = 64,
  DataError = 65,
  NoInput = 66,
  Internal = 70,
};

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace tropcert::cli
