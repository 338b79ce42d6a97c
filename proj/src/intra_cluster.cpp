#include "cluvrp/intra_cluster.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace cluvrp {

namespace {

// Layered DP over the route: fw[p][e] = cheapest depot -> ... -> leaving unit p
// at port e; bw[p][e] = cheapest from entering unit p at port e back to the depot.
struct RouteDp {
    std::vector<std::array<double, 2>> fw, bw;

    void run(const FixedPathModel& model, std::span<const int> units) {
        const int L = static_cast<int>(units.size());
        fw.assign(L, {kInf, kInf});
        bw.assign(L, {kInf, kInf});
        for (int p = 0; p < L; ++p) {
            const int u = units[p];
            const auto ports = model.ports(u);
            const auto in = model.inner(u);
            for (int e = 0; e < static_cast<int>(ports.size()); ++e) {
                double best = kInf;
                for (int x = 0; x < static_cast<int>(ports.size()); ++x) {
                    double reach;
                    if (p == 0) {
                        reach = model.edge(0, ports[x]);
                    } else {
                        const auto prev = model.ports(units[p - 1]);
                        reach = kInf;
                        for (int y = 0; y < static_cast<int>(prev.size()); ++y)
                            reach = std::min(reach, fw[p - 1][y] + model.edge(prev[y], ports[x]));
                    }
                    best = std::min(best, reach + in(x, e));
                }
                fw[p][e] = best;
            }
        }
        for (int p = L - 1; p >= 0; --p) {
            const int u = units[p];
            const auto ports = model.ports(u);
            const auto in = model.inner(u);
            for (int e = 0; e < static_cast<int>(ports.size()); ++e) {
                double best = kInf;
                for (int x = 0; x < static_cast<int>(ports.size()); ++x) {
                    double leave;
                    if (p == L - 1) {
                        leave = model.edge(ports[x], 0);
                    } else {
                        const auto next = model.ports(units[p + 1]);
                        leave = kInf;
                        for (int y = 0; y < static_cast<int>(next.size()); ++y)
                            leave = std::min(leave, model.edge(ports[x], next[y]) + bw[p + 1][y]);
                    }
                    best = std::min(best, in(e, x) + leave);
                }
                bw[p][e] = best;
            }
        }
    }
};

double path_cost(const FixedPathModel& model, const std::vector<int>& order) {
    double c = 0;
    for (std::size_t i = 1; i < order.size(); ++i) c += model.edge(order[i - 1], order[i]);
    return c;
}

bool search(FixedPathModel& model, std::span<const int> units, bool endpoints_only) {
    const int L = static_cast<int>(units.size());
    if (L == 0) return false;
    RouteDp dp;
    dp.run(model, units);
    bool changed = false;
    std::vector<int> cand;

    for (int p = 0; p < L; ++p) {
        const int u = units[p];
        if (model.path(u).size() < 3) continue;
        bool again = true;
        while (again) {
            again = false;
            // Context: cheapest arrival at any vertex v from the previous unit,
            // cheapest return to the depot from v through the following units.
            auto arrive = [&](int v) {
                if (p == 0) return model.edge(0, v);
                const auto prev = model.ports(units[p - 1]);
                double best = kInf;
                for (int y = 0; y < static_cast<int>(prev.size()); ++y)
                    best = std::min(best, dp.fw[p - 1][y] + model.edge(prev[y], v));
                return best;
            };
            auto depart = [&](int v) {
                if (p == L - 1) return model.edge(v, 0);
                const auto next = model.ports(units[p + 1]);
                double best = kInf;
                for (int y = 0; y < static_cast<int>(next.size()); ++y)
                    best = std::min(best, model.edge(v, next[y]) + dp.bw[p + 1][y]);
                return best;
            };
            auto total = [&](const std::vector<int>& order, double pc) {
                const int f = order.front();
                const int l = order.back();
                return std::min(arrive(f) + pc + depart(l), arrive(l) + pc + depart(f));
            };

            const std::vector<int> cur(model.path(u).begin(), model.path(u).end());
            const int lam = static_cast<int>(cur.size());
            const double base = total(cur, model.path_cost(u));
            auto try_order = [&](const std::vector<int>& order) {
                if (total(order, path_cost(model, order)) < base - kImprovementEps) {
                    model.set_path(u, order);
                    dp.run(model, units);
                    changed = again = true;
                    return true;
                }
                return false;
            };

            // Relocate: take position i out, reinsert at index j of the remainder.
            for (int i = 0; i < lam && !again; ++i)
                for (int j = 0; j < lam && !again; ++j) {
                    if (j == i) continue;
                    if (endpoints_only && i != 0 && i != lam - 1 && j != 0 && j != lam - 1) continue;
                    cand = cur;
                    const int v = cand[i];
                    cand.erase(cand.begin() + i);
                    cand.insert(cand.begin() + j, v);
                    try_order(cand);
                }
            // 2-opt: reverse [i..j]; the full reversal is just the other orientation.
            for (int i = 0; i < lam && !again; ++i)
                for (int j = i + 1; j < lam && !again; ++j) {
                    if (i == 0 && j == lam - 1) continue;
                    if (endpoints_only && i != 0 && j != lam - 1) continue;
                    cand = cur;
                    std::reverse(cand.begin() + i, cand.begin() + j + 1);
                    try_order(cand);
                }
            for (int i = 0; i < lam && !again; ++i)
                for (int j = i + 1; j < lam && !again; ++j) {
                    if (endpoints_only && i != 0 && j != lam - 1) continue;
                    cand = cur;
                    std::swap(cand[i], cand[j]);
                    try_order(cand);
                }
        }
    }
    return changed;
}

}  // namespace

bool endpoints_search(FixedPathModel& model, std::span<const int> units) { return search(model, units, true); }

bool intra_cluster_search(FixedPathModel& model, std::span<const int> units) {
    return search(model, units, false);
}

double fixed_route_cost(const FixedPathModel& model, std::span<const int> units) {
    if (units.empty()) return 0;
    RouteDp dp;
    dp.run(model, units);
    return std::min(dp.bw[0][0] + model.edge(0, model.ports(units[0])[0]),
                    model.port_count(units[0]) > 1 ? dp.bw[0][1] + model.edge(0, model.ports(units[0])[1]) : kInf);
}

}  // namespace cluvrp
