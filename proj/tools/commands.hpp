#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlca::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,
  kCapExceeded = 2,
  kExpectationFailed = 3,
  kSufficiencyViolation = 4,
};

// Runs the ca-verify command line; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlca::cli
