#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qhd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `qhd` tool. `args` excludes the program name. Returns
/// 0 on success, 1 when verification or a computation fails, 2 on usage or
/// configuration errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qhd
