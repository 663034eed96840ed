#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ufix::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kIo = 2;
constexpr int kInvariant = 3;

std::string version();

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ufix::cli
