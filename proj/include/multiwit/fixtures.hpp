#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multiwit/sysio.hpp"

namespace multiwit {

inline constexpr std::uint64_t kFixtureSeed = 20190611;

/// Names of the built-in systems; pentad only when extended.
std::vector<std::string> fixture_names(bool extended = false);

/// Source text of a built-in system. Random matrices inside fixtures come from kFixtureSeed.
std::string fixture_text(const std::string& name);

SystemDocument load_fixture(const std::string& name);

/// Degree vectors (1,2,3) six times on (3,3,3).
std::vector<MultiIndex> class_fixture_degrees();

/// Maximal minors of (C | N_i) with row j removed, C = (I_3 | M)^T; i in {1,2}, j in 1..6.
Polynomial richardson_minor(int i, int j, std::uint64_t seed = kFixtureSeed);

}  // namespace multiwit
