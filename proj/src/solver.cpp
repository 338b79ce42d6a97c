#include "cluvrp/solver.hpp"

#include <chrono>

#include "cluvrp/ils.hpp"
#include "cluvrp/uhgs.hpp"

namespace cluvrp {

std::string_view to_string(SolverId id) {
    switch (id) {
        case SolverId::Ils: return "ils";
        case SolverId::IlsClu: return "ils-clu";
        case SolverId::Uhgs: return "uhgs";
    }
    return "?";
}

SolverId solver_from_string(std::string_view name) {
    if (name == "ils") return SolverId::Ils;
    if (name == "ils-clu") return SolverId::IlsClu;
    if (name == "uhgs") return SolverId::Uhgs;
    throw Error("unknown solver '" + std::string(name) + "' (expected ils, ils-clu or uhgs)");
}

SolveOutcome solve(const Instance& inst, SolverId solver, std::uint64_t seed, const SolveLimits& limits,
                   const std::string& cache_dir, const PathCostTable* table) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    SolveOutcome out;
    if (solver == SolverId::Uhgs) {
        PathCostTable local;
        if (!table) {
            if (cache_dir.empty()) local = build_path_table(inst, limits.lambda_max);
            else local = load_or_build_path_table(inst, cache_dir, limits.lambda_max, 1, &out.cache_hit);
            table = &local;
        }
        out.preprocess_seconds = table->compute_seconds;
        UhgsConfig cfg;
        cfg.seed = seed;
        cfg.mu_min = limits.mu_min;
        cfg.mu_gen = limits.mu_gen;
        cfg.it_max = limits.it_max;
        cfg.time_limit = limits.time_limit;
        const auto t1 = Clock::now();
        out.solution = run_uhgs(inst, *table, cfg).best;
        out.seconds = std::chrono::duration<double>(Clock::now() - t1).count() + out.preprocess_seconds;
    } else {
        IlsConfig cfg;
        cfg.mode = solver == SolverId::Ils ? IlsMode::Vertex : IlsMode::Cluster;
        cfg.seed = seed;
        cfg.restarts = limits.restarts;
        cfg.shakes = limits.shakes;
        cfg.time_limit = limits.time_limit;
        out.solution = run_ils(inst, cfg).best;
        out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    out.validation = validate_solution(inst, out.solution);
    return out;
}

}  // namespace cluvrp
