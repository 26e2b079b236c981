#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bforge {

inline constexpr int kExitPass = 0;
inline constexpr int kExitDefect = 1;
inline constexpr int kExitInputError = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bforge
