#pragma once

#include <iosfwd>

namespace nakasim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad flags or config
inline constexpr int kExitPartial = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the nakasim command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nakasim::cli
