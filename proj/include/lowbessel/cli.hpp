#pragma once

// Command-line front end. Exit codes: 0 success or statistical test passed,
// 1 usage or runtime error, 2 statistical test failed.

#include <iosfwd>
#include <string>
#include <vector>

namespace lowbessel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTestFailed = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lowbessel::cli
