#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqm::cli {

inline constexpr unsigned long long kDefaultSeed = 42;

/// Runs one CLI invocation. args excludes the program name.
/// Exit codes: 0 success, 1 validation error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqm::cli
