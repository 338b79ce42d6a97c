#pragma once

#include <span>
#include <vector>

#include "cluvrp/instance.hpp"

namespace cluvrp {

// c'(i, j) = c(i, j) + M when i and j lie in different clusters or one of
// them is the depot. A cluster-feasible solution with m non-empty routes uses
// exactly m + N such edges.
CostMatrix m_penalty_costs(const Instance& inst, double M);

// (n + m) * max c + 1: larger than the cost of any solution with m routes,
// which has n + m edges.
double choose_M(const Instance& inst);

bool is_penalized_edge(const Instance& inst, int i, int j);

// Penalized edges of depot -> route -> depot, summed over routes.
int count_penalized_edges(const Instance& inst, const std::vector<std::vector<int>>& routes);

}  // namespace cluvrp
