#include "cluvrp/construction.hpp"

#include <algorithm>
#include <numeric>

namespace cluvrp {

namespace {

// assign: route per cluster fixed in advance, or empty for a free choice.
bool try_build(const Instance& inst, Rng& rng, const std::vector<int>& assign,
               std::vector<std::vector<int>>& routes) {
    const int m = inst.fleet();
    const int Q = inst.capacity();
    routes.assign(m, {});
    std::vector<int> reserved(m, 0);
    std::vector<int> route_of(inst.cluster_count(), -1);
    int opened = 0;

    std::vector<int> order(inst.customers());
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);

    auto insertion_cost = [&](const std::vector<int>& r, int pos, int v) {
        const int prev = pos == 0 ? 0 : r[pos - 1];
        const int next = pos == static_cast<int>(r.size()) ? 0 : r[pos];
        return inst.cost(prev, v) + inst.cost(v, next) - inst.cost(prev, next);
    };

    for (int v : order) {
        const int k = inst.cluster_of(v);
        int best_r = -1;
        int best_pos = -1;
        double best = kInf;
        if (route_of[k] >= 0) {
            const auto& r = routes[route_of[k]];
            int first = -1;
            int last = -1;
            for (int p = 0; p < static_cast<int>(r.size()); ++p)
                if (inst.cluster_of(r[p]) == k) {
                    if (first < 0) first = p;
                    last = p;
                }
            for (int pos = first; pos <= last + 1; ++pos) {
                const double c = insertion_cost(r, pos, v);
                if (c < best) best = c, best_r = route_of[k], best_pos = pos;
            }
        } else {
            const int demand = inst.cluster_demand(k);
            const int want_open = opened < std::min(m, inst.cluster_count());
            for (int ri = 0; ri < m; ++ri) {
                const auto& r = routes[ri];
                if (!assign.empty() && ri != assign[k]) continue;
                if (reserved[ri] + demand > Q) continue;
                if (assign.empty() && want_open != r.empty()) continue;
                for (int pos = 0; pos <= static_cast<int>(r.size()); ++pos) {
                    // Not strictly inside a block.
                    if (pos > 0 && pos < static_cast<int>(r.size()) &&
                        inst.cluster_of(r[pos - 1]) == inst.cluster_of(r[pos]))
                        continue;
                    const double c = insertion_cost(r, pos, v);
                    if (c < best) best = c, best_r = ri, best_pos = pos;
                }
                if (want_open && assign.empty()) break;  // empty routes are interchangeable
            }
            if (best_r < 0) return false;
            if (routes[best_r].empty()) ++opened;
            route_of[k] = best_r;
            reserved[best_r] += demand;
        }
        routes[best_r].insert(routes[best_r].begin() + best_pos, v);
    }
    return true;
}

// First fit of the clusters into the fleet, in decreasing demand on the first
// try and in random order afterwards. Empty when it needs too many vehicles.
std::vector<int> first_fit(const Instance& inst, Rng& rng, bool decreasing) {
    std::vector<int> order(inst.cluster_count());
    std::iota(order.begin(), order.end(), 0);
    if (decreasing)
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return inst.cluster_demand(a) > inst.cluster_demand(b); });
    else
        std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> load(inst.fleet(), 0);
    std::vector<int> assign(inst.cluster_count(), -1);
    for (int k : order) {
        int r = 0;
        while (r < inst.fleet() && load[r] + inst.cluster_demand(k) > inst.capacity()) ++r;
        if (r == inst.fleet()) return {};
        load[r] += inst.cluster_demand(k);
        assign[k] = r;
    }
    return assign;
}

}  // namespace

std::vector<std::vector<int>> cheapest_insertion(const Instance& inst, Rng& rng, int max_attempts) {
    std::vector<std::vector<int>> routes;
    // Tight fleets defeat the free insertion; the second half of the attempts
    // fixes the cluster-to-vehicle assignment by a packing first.
    const int free_attempts = (max_attempts + 1) / 2;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt < free_attempts) {
            if (try_build(inst, rng, {}, routes)) return routes;
            continue;
        }
        const auto assign = first_fit(inst, rng, attempt == free_attempts);
        if (!assign.empty() && try_build(inst, rng, assign, routes)) return routes;
    }
    throw Error("cheapest insertion found no capacity-feasible solution in " + std::to_string(max_attempts) +
                " attempts");
}

std::vector<std::vector<int>> cluster_sequences(const Instance& inst, const std::vector<std::vector<int>>& routes) {
    std::vector<std::vector<int>> out;
    out.reserve(routes.size());
    for (const auto& r : routes) {
        std::vector<int> seq;
        for (int v : r) {
            const int k = inst.cluster_of(v);
            if (seq.empty() || seq.back() != k) seq.push_back(k);
        }
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace cluvrp
