#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dipole::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

/// Entry point behind the `dipolefield` binary. `args` excludes the program
/// name. Machine output goes to files or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dipole::cli
