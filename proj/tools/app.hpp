#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmrank::cli {

inline constexpr const char* kSchemaVersion = "1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Runs one command line (args excludes the program name). Reports go to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmrank::cli
