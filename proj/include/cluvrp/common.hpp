#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace cluvrp {

// Unreachable / forbidden. Propagates through + and min without special cases.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Strict-improvement threshold for move acceptance. Integer-rounded instances
// produce integral deltas, so this only matters for exact-real costs.
inline constexpr double kImprovementEps = 1e-7;

using Rng = std::mt19937_64;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace cluvrp
