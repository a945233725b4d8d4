#pragma once

// Command-line front end. Exit codes: 0 success, 1 internal or load error,
// 2 findings or flags present, 64 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace srauth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFindings = 2;
inline constexpr int kExitUsage = 64;

// `args` excludes the program name. Results go to `out`, progress and
// diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srauth::cli
