// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bafsynth::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kUnrealizable = 1,
  kUsage = 2,
  kTimeoutOrLimit = 3,
  kVerificationFailed = 4,
};

/// Entry point for the `bafsynth` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bafsynth::cli
