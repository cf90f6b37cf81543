#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpa {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a verification or regularity check failed
inline constexpr int kExitUsage = 2;   // bad arguments, config or unsupported instance

// args excludes the program name. Reports go to files; `out` gets a one-line summary per artifact.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpa
