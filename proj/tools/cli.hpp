#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ectshape::cli {

inline constexpr const char* kToolName = "ect-shape";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsageError = 2, kDataError = 3 };

/// Runs one ect-shape invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ectshape::cli
