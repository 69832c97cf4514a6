#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace brauer::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kUndetermined = 2;
inline constexpr int kUsage = 64;

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brauer::cli
