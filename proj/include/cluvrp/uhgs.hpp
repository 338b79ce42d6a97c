#pragma once

#include <cstdint>
#include <vector>

#include "cluvrp/cluster_model.hpp"
#include "cluvrp/common.hpp"
#include "cluvrp/hampath.hpp"
#include "cluvrp/instance.hpp"
#include "cluvrp/solution.hpp"

namespace cluvrp {

struct UhgsConfig {
    int mu_min = 8;
    int mu_gen = 8;
    int it_max = 400;  // offspring without improvement of the best feasible solution
    std::uint64_t seed = 1;
    double time_limit = 0;  // seconds, 0 = none
    int n_close = 3;
    double elite_weight = 0.4;
    double target_feasible = 0.25;
    int initial_size = 0;  // 0 = 4 * mu_min
    double repair_probability = 0.5;
    int adapt_every = 100;  // educations between penalty updates
};

// Giant tour of clusters plus its routes.
struct Individual {
    std::vector<int> tour;
    std::vector<std::vector<int>> routes;  // cluster units, fleet-sized, may hold empty routes
    double cost = 0;                       // sum of route costs
    int excess = 0;                        // total capacity overflow
    double diversity = 0;
    double fitness = 0;
    bool clone = false;

    bool feasible() const { return excess == 0; }
    double penalized(double penalty) const { return cost + penalty * excess; }
};

// Child keeps p1[a..b] (inclusive) in place; the other positions are filled,
// starting after b and wrapping around, with the remaining clusters in p2's
// order read from position b + 1 on.
std::vector<int> ox_crossover(const std::vector<int>& p1, const std::vector<int>& p2, int a, int b);
std::vector<int> ox_crossover(const std::vector<int>& p1, const std::vector<int>& p2, Rng& rng);

struct SplitResult {
    std::vector<std::vector<int>> routes;  // non-empty, in tour order
    double penalized = 0;
};

// Optimal cut of the tour into at most max_routes consecutive routes,
// minimizing sum of route cost + penalty * max(0, load - capacity).
SplitResult split(const std::vector<int>& tour, const ClusterModel& model, int capacity, int max_routes,
                  double penalty);

// Fraction of clusters whose successor on the cyclic tour of a is a neighbor
// of neither side in b.
double broken_pairs_distance(const std::vector<int>& a, const std::vector<int>& b);

// Diversity = mean distance to the n_close nearest others; fitness =
// cost_rank + (1 - elite_weight) * diversity_rank, ranks scaled to [0, 1]
// (cost ascending, diversity descending). Also marks clones.
void update_biased_fitness(std::vector<Individual>& pop, int n_close, double elite_weight, double penalty);

// x1.2 when fewer feasible than the target, /1.2 when more, within
// [0.01, 1000] * mean_cost.
double adapt_penalty(double penalty, double feasible_fraction, double target, double mean_cost);

struct UhgsStats {
    long iterations = 0;
    long educations = 0;
    double penalty = 0;
    double seconds = 0;
    std::vector<double> best_trace;  // best feasible cost after each offspring
};

struct UhgsResult {
    Solution best;
    UhgsStats stats;
};

UhgsResult run_uhgs(const Instance& inst, const PathCostTable& table, const UhgsConfig& config);

}  // namespace cluvrp
