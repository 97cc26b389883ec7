#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbm {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // computation error
inline constexpr int kExitUsage = 2;    // bad flags or out-of-range values

// Subcommands: enumerate, optimize, sweep {surface|diff|occurrence|nscaling},
// simulate, compare. Results go to `out` unless --out names a file.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gbm
