#pragma once

#include <string>
#include <vector>

#include "cluvrp/instance.hpp"

namespace cluvrp {

// Customer-level solution: one visiting order per used vehicle, depot omitted.
struct Solution {
    std::vector<std::vector<int>> routes;
    double cost = 0;
};

struct Validation {
    bool feasible = false;
    double cost = 0;
    std::string error;
};

// Independent checker: every customer exactly once, clusters contiguous and in
// a single route, capacity, fleet size. The cost is re-summed from raw edges
// of the instance, ignoring Solution::cost.
Validation validate_solution(const Instance& inst, const Solution& sol);

}  // namespace cluvrp
