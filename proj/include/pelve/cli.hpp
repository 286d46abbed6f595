#pragma once

#include <iosfwd>

namespace pelve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUsage = 64;

// Parses argv (argv[0] is the program name) and runs the selected verb.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pelve::cli
