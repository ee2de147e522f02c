#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multiwit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr unsigned long long kDefaultSeed = 1;

/// Runs one command; JSON goes to `out` (or --output), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multiwit
