#pragma once

// The `conman` command line. Exit codes: 0 success, 1 validation or
// expectation failures, 2 usage and I/O errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace conman::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace conman::cli
