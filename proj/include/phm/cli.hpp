#pragma once

#include <iosfwd>

namespace phm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitStartup = 2;
inline constexpr int kExitUsage = 64;

/// Runs `phm` with the given arguments (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phm::cli
