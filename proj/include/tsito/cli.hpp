#pragma once

#include <iosfwd>

namespace tsito::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the tsito command line. Returns 0 when every pass flag
/// holds, 1 when a check fails and 2 on configuration errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsito::cli
