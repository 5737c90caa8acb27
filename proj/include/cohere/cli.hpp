#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cohere {

inline constexpr const char* kVersion = "0.1.0";
/// Overrides the default tolerance when set to a positive number.
inline constexpr const char* kToleranceEnv = "COHERE_TOLERANCE";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFinding = 2,     // an inequality or invariant broke
  kExitNumerical = 3,   // input or intermediate failed numerical validation
};

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cohere
