#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptasynth::cli {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kUsage = 2,
  kCapacity = 3,
};

/// Runs the tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptasynth::cli
