#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omnitile::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command line (without the program name). Usage and validation
/// problems return kExitUsage, I/O and data problems kExitRuntime.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace omnitile::cli
