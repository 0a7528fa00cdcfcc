#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "realstab/analysis.hpp"

namespace realstab {

/// Process exit codes of the realstab tool.
namespace exit_code {
inline constexpr int kStable = 0;
inline constexpr int kFailure = 1;  ///< unstable samples, disagreeing routes, other errors
inline constexpr int kMarginal = 2;
inline constexpr int kUnstable = 3;  ///< also improper
inline constexpr int kNoStabilityMatrix = 4;
inline constexpr int kSingularPerturbedLoop = 5;
inline constexpr int kPoleOnGrid = 6;
inline constexpr int kNotStabilizing = 7;
inline constexpr int kUsage = 64;  ///< bad flags or unparsable input
inline constexpr int kData = 65;   ///< dimension or consistency error
inline constexpr int kMissing = 66;  ///< missing file or parameterization block
}  // namespace exit_code

int exit_code_for(StabilityStatus s);
/// Maps a library exception to its exit code.
int exit_code_for(const std::exception& e);

/// Runs one command. `args` excludes the program name. Human-readable output
/// goes to `out` (or the JSON report with --json); diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace realstab
