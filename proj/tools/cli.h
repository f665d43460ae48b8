#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one subcommand. args excludes the program name. Data goes to out or to
// files named by flags; diagnostics go to err.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace subseg::cli
