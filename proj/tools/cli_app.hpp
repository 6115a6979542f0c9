#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dedekind::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Primary output goes to files under --out
// when given, else to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace dedekind::cli
