#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pweight::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "PWEIGHT_OUT_DIR";

/// Entry point behind the `pweight` executable. `args` excludes the program
/// name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pweight::cli
