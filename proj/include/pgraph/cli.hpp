#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgraph {

// Exit codes of `analyze`.
enum ExitCode : int {
    kDeadlockFree = 0,
    kInputError = 1,
    kReachableDeadlock = 2,
    kUnreachableDeadlockOnly = 3,
};

// args excludes the program name, e.g. {"analyze", "swiss.msc", "--report", "json"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgraph
