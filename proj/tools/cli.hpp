#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dofnet::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kInternalError = 2;

/// Default seed when neither --seed nor this variable is set is 1.
inline constexpr const char* kSeedEnv = "DOFNET_SEED";

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dofnet::cli
