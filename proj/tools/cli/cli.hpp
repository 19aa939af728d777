#pragma once

#include <iosfwd>

namespace adjrisk::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `adjrisk` executable with injectable streams.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace adjrisk::cli
