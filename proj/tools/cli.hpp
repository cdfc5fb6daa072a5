#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqap::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kSizeGuard = 3;
inline constexpr int kIo = 4;

// Parses args (without the program name) and runs one subcommand.
// Results go to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqap::cli
