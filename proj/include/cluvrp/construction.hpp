#pragma once

#include <vector>

#include "cluvrp/common.hpp"
#include "cluvrp/instance.hpp"

namespace cluvrp {

// Parallel cheapest insertion over m routes. Customers are taken in random
// order and inserted at the cheapest position that keeps clusters contiguous:
// inside or at the border of their cluster's block if the cluster is already
// routed, otherwise between two blocks of a route with room for the whole
// cluster. The first min(m, N) new clusters each open their own route.
// A dead end restarts with a new order; the later attempts first pack the
// clusters into the vehicles by first fit and insert within the assigned
// route only. Throws after max_attempts.
// Returns exactly m customer routes, some possibly empty.
std::vector<std::vector<int>> cheapest_insertion(const Instance& inst, Rng& rng, int max_attempts = 50);

// Cluster order of each customer route (clusters must be contiguous).
std::vector<std::vector<int>> cluster_sequences(const Instance& inst, const std::vector<std::vector<int>>& routes);

}  // namespace cluvrp
