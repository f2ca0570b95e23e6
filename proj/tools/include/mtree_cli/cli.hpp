#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtree::cli {

enum ExitStatus : int {
  kOk = 0,
  kValidationFailure = 1,  // also comparison precondition failures
  kInputError = 2,
  kInternalError = 3,
};

/// Runs one command line (without the program name). Reads stdin for a file
/// argument of "-".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtree::cli
