#include "cluvrp/solution.hpp"

namespace cluvrp {

Validation validate_solution(const Instance& inst, const Solution& sol) {
    Validation out;
    const int n = inst.customers();
    std::vector<int> visits(n + 1, 0);
    std::vector<int> cluster_seen(inst.cluster_count(), 0);
    int used = 0;
    double total = 0;
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        const auto& route = sol.routes[r];
        if (route.empty()) continue;
        ++used;
        long load = 0;
        int prev = 0;
        int prev_cluster = -1;
        double cost = 0;
        for (int v : route) {
            if (v < 1 || v > n) {
                out.error = "route " + std::to_string(r) + " visits invalid vertex " + std::to_string(v);
                return out;
            }
            if (++visits[v] > 1) {
                out.error = "customer " + std::to_string(v) + " visited twice";
                return out;
            }
            const int k = inst.cluster_of(v);
            if (k != prev_cluster) {
                if (cluster_seen[k] > 0) {
                    out.error = "cluster " + std::to_string(k + 1) + " is not visited contiguously";
                    return out;
                }
            }
            ++cluster_seen[k];
            prev_cluster = k;
            load += inst.demand(v);
            cost += inst.cost(prev, v);
            prev = v;
        }
        cost += inst.cost(prev, 0);
        if (load > inst.capacity()) {
            out.error = "route " + std::to_string(r) + " load " + std::to_string(load) + " exceeds capacity";
            return out;
        }
        total += cost;
    }
    for (int v = 1; v <= n; ++v)
        if (visits[v] == 0) {
            out.error = "customer " + std::to_string(v) + " is not visited";
            return out;
        }
    if (used > inst.fleet()) {
        out.error = std::to_string(used) + " routes exceed the fleet of " + std::to_string(inst.fleet());
        return out;
    }
    out.feasible = true;
    out.cost = total;
    return out;
}

}  // namespace cluvrp
