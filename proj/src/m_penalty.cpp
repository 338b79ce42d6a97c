#include "cluvrp/m_penalty.hpp"

namespace cluvrp {

bool is_penalized_edge(const Instance& inst, int i, int j) {
    if (i == j) return false;
    if (i == 0 || j == 0) return true;
    return inst.cluster_of(i) != inst.cluster_of(j);
}

CostMatrix m_penalty_costs(const Instance& inst, double M) {
    if (!(M > 0)) throw Error("M must be positive");
    const int dim = inst.vertices();
    CostMatrix out(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(i, j) = inst.cost(i, j) + (is_penalized_edge(inst, i, j) ? M : 0.0);
    return out;
}

double choose_M(const Instance& inst) {
    return static_cast<double>(inst.customers() + inst.fleet()) * inst.costs().max_cost() + 1;
}

int count_penalized_edges(const Instance& inst, const std::vector<std::vector<int>>& routes) {
    int count = 0;
    for (const auto& r : routes) {
        if (r.empty()) continue;
        int prev = 0;
        for (int v : r) {
            count += is_penalized_edge(inst, prev, v);
            prev = v;
        }
        count += is_penalized_edge(inst, prev, 0);
    }
    return count;
}

}  // namespace cluvrp
