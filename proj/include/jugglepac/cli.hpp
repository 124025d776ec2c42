#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jpac {

/// Exit codes: 0 success, 1 verification or invariant failure, 2 usage,
/// configuration or workload error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `jugglepac` tool; argv[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace jpac
