#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aporbit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitConfig = 3;

/// Entry point for the `aporbit` tool. `args` excludes the program name.
/// Commands: run, verify, ladder, ar, census, validate-map.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aporbit::cli
