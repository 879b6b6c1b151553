#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fontocr::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeFailure = 1,
  kUsage = 2,
  kIo = 3,
  kValidation = 4,
};

/// Run the command line given as argv-style strings (args[0] is the program
/// name). Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fontocr::cli
