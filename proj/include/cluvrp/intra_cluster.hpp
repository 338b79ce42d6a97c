#pragma once

#include <span>

#include "cluvrp/cluster_model.hpp"

namespace cluvrp {

// Descents on the fixed customer paths of the clusters of one route (cluster
// units, in visiting order). Moves are Relocate, 2-opt and Swap inside one
// cluster's path, priced against the rest of the route, first improvement.
// The cluster order of the route never changes. Both return true if some path
// was changed; the caller must re-tabulate the route.

// Only moves that move a current end customer of the path or create a new end.
bool endpoints_search(FixedPathModel& model, std::span<const int> units);

// All moves.
bool intra_cluster_search(FixedPathModel& model, std::span<const int> units);

// Cost of the route under the model's current paths (orientation chosen optimally).
double fixed_route_cost(const FixedPathModel& model, std::span<const int> units);

}  // namespace cluvrp
