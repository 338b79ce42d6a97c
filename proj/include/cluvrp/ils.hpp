#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cluvrp/cluster_model.hpp"
#include "cluvrp/common.hpp"
#include "cluvrp/instance.hpp"
#include "cluvrp/solution.hpp"

namespace cluvrp {

enum class IlsMode {
    Vertex,   // customer-level moves on M-penalized costs
    Cluster,  // whole-cluster moves plus endpoint and intra-cluster searches
};

enum class MPolicy {
    Auto,   // choose_M
    Fixed,  // IlsConfig::M
    None,   // plain costs, for instances whose clusters are singletons
};

struct LocalOptimum {
    std::vector<std::vector<int>> routes;  // customers
    double cost = 0;                       // under the search metric (c' in vertex mode)
};

struct IlsConfig {
    IlsMode mode = IlsMode::Cluster;
    int restarts = 50;  // n_R
    int shakes = 0;     // n_I; 0 = n + 5m (vertex) or 1000 (cluster)
    std::uint64_t seed = 1;
    MPolicy m_policy = MPolicy::Auto;
    double M = 0;
    double time_limit = 0;  // seconds, 0 = none
    std::function<void(const LocalOptimum&)> on_local_optimum;
};

struct IlsStats {
    int restarts = 0;
    long shakes = 0;
    long local_searches = 0;
    double seconds = 0;
    double M = 0;  // used penalty, 0 without
};

struct IlsResult {
    Solution best;
    IlsStats stats;
};

int default_shakes(const Instance& inst, IlsMode mode);

// One or two random Shift(1,1) / Swap moves on unit routes. Vertex mode:
// Shift(1,1) trades a random unit between two routes, each landing at a
// random position; Swap exchanges two units of different routes. Cluster
// mode: the same Shift(1,1) on clusters, Swap exchanges two clusters of one
// route. Draws breaking capacity are retried up to 20 times; returns the
// number of moves applied.
int perturb(std::vector<std::vector<int>>& routes, const ClusterModel& model, int capacity, IlsMode mode,
            Rng& rng);

IlsResult run_ils(const Instance& inst, const IlsConfig& config);

}  // namespace cluvrp
