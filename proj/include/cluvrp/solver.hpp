#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cluvrp/hampath.hpp"
#include "cluvrp/instance.hpp"
#include "cluvrp/solution.hpp"

namespace cluvrp {

enum class SolverId { Ils, IlsClu, Uhgs };

std::string_view to_string(SolverId id);
SolverId solver_from_string(std::string_view name);  // ils | ils-clu | uhgs

struct SolveLimits {
    double time_limit = 300;  // seconds per run, 0 = none
    int restarts = 50;        // ILS n_R
    int shakes = 0;           // ILS n_I, 0 = mode default
    int mu_min = 8;
    int mu_gen = 8;
    int it_max = 400;
    int lambda_max = kDefaultLambdaMax;
};

struct SolveOutcome {
    Solution solution;
    Validation validation;
    double seconds = 0;             // total, preprocessing included
    double preprocess_seconds = 0;  // UHGS only
    bool cache_hit = false;
};

// Runs one solver. UHGS needs the path table: `table` if given, else the
// cache directory (empty = compute in memory). The result is re-checked by
// validate_solution.
SolveOutcome solve(const Instance& inst, SolverId solver, std::uint64_t seed, const SolveLimits& limits,
                   const std::string& cache_dir = {}, const PathCostTable* table = nullptr);

}  // namespace cluvrp
