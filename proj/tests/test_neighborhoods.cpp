#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cluvrp/cluster_model.hpp"
#include "cluvrp/construction.hpp"
#include "cluvrp/hampath.hpp"
#include "cluvrp/intra_cluster.hpp"
#include "cluvrp/local_search.hpp"
#include "cluvrp/m_penalty.hpp"
#include "cluvrp/seq_concat.hpp"
#include "oracles.hpp"

using namespace cluvrp;

namespace {

const std::vector<MoveKind> kAllKinds{MoveKind::Relocate1,  MoveKind::Relocate2,          MoveKind::Swap11,
                                      MoveKind::Swap21,     MoveKind::Swap22,             MoveKind::TwoOptStar,
                                      MoveKind::TwoOptStarReversed, MoveKind::Cross,      MoveKind::OrOpt,
                                      MoveKind::TwoOpt,     MoveKind::IntraSwap};

struct Fixture {
    Instance inst;
    PathCostTable table;
    ExactClusterModel model;

    explicit Fixture(Instance i) : inst(std::move(i)), table(build_path_table(inst)), model(inst, table) {}
};

// Clusters dealt round-robin after a shuffle; capacity ignored.
std::vector<std::vector<int>> random_routes(Rng& rng, int clusters, int count) {
    std::vector<int> all(clusters);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::vector<int>> routes(count);
    for (int k = 0; k < clusters; ++k) routes[k % count].push_back(all[k]);
    return routes;
}

double oracle_total(const Instance& inst, const std::vector<std::vector<int>>& routes) {
    double sum = 0;
    for (const auto& r : routes) sum += oracle::layered_route_cost(inst, r);
    return sum;
}

int demand_of(const Instance& inst, const std::vector<int>& clusters) {
    int q = 0;
    for (int k : clusters) q += inst.cluster_demand(k);
    return q;
}

double oracle_penalized(const Instance& inst, const std::vector<std::vector<int>>& routes, double penalty) {
    double sum = 0;
    for (const auto& r : routes)
        sum += oracle::layered_route_cost(inst, r) + penalty * std::max(0, demand_of(inst, r) - inst.capacity());
    return sum;
}

std::vector<int> sorted_units(const std::vector<std::vector<int>>& routes) {
    std::vector<int> all;
    for (const auto& r : routes) all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end());
    return all;
}

bool contiguous_clusters(const Instance& inst, const std::vector<int>& customers) {
    std::vector<char> closed(inst.cluster_count(), 0);
    int current = -1;
    for (int v : customers) {
        const int k = inst.cluster_of(v);
        if (k == current) continue;
        if (closed[k]) return false;
        if (current >= 0) closed[current] = 1;
        current = k;
    }
    return true;
}

}  // namespace

TEST_CASE("swap 1-1 between two routes of two clusters has four candidates") {
    Rng rng(1);
    Fixture f{oracle::random_instance(rng, 8, 4)};
    LsOptions opt;
    opt.hard_capacity = false;
    LocalSearch ls(f.model, f.inst.capacity(), opt);
    ls.load({{0, 1}, {2, 3}});
    CHECK(ls.enumerate(MoveKind::Swap11).size() == 4);
    CHECK(ls.enumerate(MoveKind::Relocate1).size() == 12);  // 2 units x 3 slots, both directions
}

TEST_CASE("best swap 1-1 and relocate 1 equal an exhaustive search") {
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        Fixture f{oracle::random_instance(rng, 14, 6)};
        const auto routes = random_routes(rng, 6, 2 + t % 2);
        LsOptions opt;
        opt.hard_capacity = false;
        LocalSearch ls(f.model, f.inst.capacity(), opt);
        ls.load(routes);
        const double base = oracle_total(f.inst, routes);

        double want_swap = kInf;
        double want_reloc = kInf;
        for (std::size_t a = 0; a < routes.size(); ++a)
            for (std::size_t b = 0; b < routes.size(); ++b) {
                if (a == b) continue;
                for (std::size_t i = 0; i < routes[a].size(); ++i) {
                    for (std::size_t j = 0; j < routes[b].size(); ++j) {
                        auto s = routes;
                        std::swap(s[a][i], s[b][j]);
                        want_swap = std::min(want_swap, oracle_total(f.inst, s) - base);
                    }
                    for (std::size_t j = 0; j <= routes[b].size(); ++j) {
                        auto s = routes;
                        const int unit = s[a][i];
                        s[a].erase(s[a].begin() + static_cast<long>(i));
                        s[b].insert(s[b].begin() + static_cast<long>(j), unit);
                        want_reloc = std::min(want_reloc, oracle_total(f.inst, s) - base);
                    }
                }
            }
        const auto swap = ls.best_move(MoveKind::Swap11);
        const auto reloc = ls.best_move(MoveKind::Relocate1);
        REQUIRE(swap);
        REQUIRE(reloc);
        CHECK(swap->delta == want_swap);
        CHECK(reloc->delta == want_reloc);
    }
}

TEST_CASE("evaluated deltas equal the change after applying") {
    Rng rng(3);
    long checked = 0;
    for (int t = 0; t < 60; ++t) {
        Fixture f{oracle::random_instance(rng, 16 + t % 8, 7)};
        LsOptions opt;
        opt.hard_capacity = false;
        opt.penalty = t % 2 ? 7.5 : 0;
        opt.segment_reversal = t % 3 == 0;
        LocalSearch ls(f.model, f.inst.capacity(), opt);
        auto routes = random_routes(rng, 7, 3);
        if (t % 4 == 0) routes.push_back({});  // an empty route to open
        ls.load(routes);
        for (MoveKind kind : kAllKinds) {
            const auto moves = ls.enumerate(kind);
            if (moves.empty()) continue;
            for (int s = 0; s < 25; ++s) {
                const Move m = moves[rng() % moves.size()];
                LocalSearch copy = ls;
                const auto before = copy.routes();
                const auto delta = copy.evaluate(m);
                REQUIRE(delta);
                const double was = copy.penalized_cost();
                copy.apply(m);
                CHECK(sorted_units(copy.routes()) == sorted_units(before));
                CHECK(copy.penalized_cost() - was == doctest::Approx(*delta).epsilon(1e-12));
                CHECK(oracle_penalized(f.inst, copy.routes(), opt.penalty) -
                          oracle_penalized(f.inst, before, opt.penalty) ==
                      doctest::Approx(*delta).epsilon(1e-12));
                ++checked;
            }
        }
    }
    CHECK(checked >= 10000);
}

TEST_CASE("degenerate and forbidden moves") {
    Rng rng(4);
    Fixture f{oracle::random_instance(rng, 10, 5)};
    LsOptions opt;
    opt.hard_capacity = false;
    LocalSearch ls(f.model, f.inst.capacity(), opt);
    ls.load({{0, 1}, {2, 3, 4}});

    for (const Move& m : ls.enumerate(MoveKind::TwoOptStar)) {
        // exchanging empty tails or whole routes changes nothing
        CHECK(!(m.i == 0 && m.j == 0));
        CHECK(!(m.i == 2 && m.j == 3));
    }
    for (const Move& m : ls.enumerate(MoveKind::Cross)) CHECK(m.len1 + m.len2 > 0);
    for (const Move& m : ls.enumerate(MoveKind::TwoOpt)) CHECK(m.i < m.j);

    SUBCASE("empty routes: only the first one is a target") {
        ls.load({{0, 1, 2}, {}, {3, 4}, {}});
        for (const Move& m : ls.enumerate(MoveKind::Relocate1)) CHECK(m.r2 != 3);
    }
    SUBCASE("emptying a route can be forbidden") {
        LsOptions keep = opt;
        keep.allow_empty_routes = false;
        LocalSearch fixed(f.model, f.inst.capacity(), keep);
        fixed.load({{0}, {1, 2, 3, 4}});
        int forbidden = 0;
        for (const Move& m : fixed.enumerate(MoveKind::Relocate1))
            if (m.r1 == 0) {
                CHECK(!fixed.evaluate(m));
                ++forbidden;
            }
        CHECK(forbidden == 5);
    }
    SUBCASE("hard capacity rejects overloads") {
        LsOptions hard;
        LocalSearch h(f.model, f.inst.capacity(), hard);
        h.load({{0, 1}, {2, 3, 4}});
        for (MoveKind kind : {MoveKind::Relocate1, MoveKind::Swap21, MoveKind::TwoOptStar})
            for (const Move& m : h.enumerate(kind)) {
                LocalSearch copy = h;
                const bool allowed = copy.evaluate(m).has_value();
                copy.apply(m);
                bool fits = true;
                for (const auto& r : copy.routes()) fits = fits && demand_of(f.inst, r) <= f.inst.capacity();
                CHECK(allowed == fits);
            }
    }
}

TEST_CASE("descent reaches a local optimum and keeps clusters together") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        Fixture f{oracle::random_instance(rng, 20, 8)};
        LsOptions opt;
        opt.hard_capacity = false;
        opt.penalty = 50;
        LocalSearch ls(f.model, f.inst.capacity(), opt);
        ls.load(random_routes(rng, 8, f.inst.fleet() + 1));
        const double start = ls.penalized_cost();
        ls.descend(rng);
        CHECK(ls.penalized_cost() <= start);
        for (MoveKind kind : opt.inter) {
            const auto best = ls.best_move(kind);
            if (best) CHECK(best->delta >= -1e-9);
        }
        for (MoveKind kind : opt.intra) {
            const auto best = ls.best_move(kind);
            if (best) CHECK(best->delta >= -1e-9);
        }
        for (const auto& r : ls.routes()) {
            const auto customers = decode_customers(r, f.model);
            CHECK(contiguous_clusters(f.inst, customers));
            CHECK(oracle::tour_cost(f.inst, customers) == oracle::layered_route_cost(f.inst, r));
        }
    }
}

TEST_CASE("M-penalty costs") {
    InstanceData d;
    d.name = "m";
    d.capacity = 10;
    d.fleet = 2;
    d.coords = {{0, 0}, {3, 4}, {6, 8}, {-3, 4}, {-6, 8}};
    d.demand = {0, 1, 1, 1, 1};
    d.clusters = {{1, 2}, {3, 4}};
    const Instance inst(d);
    const double M = 1000;
    const CostMatrix c = m_penalty_costs(inst, M);
    CHECK(c(1, 2) == 5);     // same cluster
    CHECK(c(0, 1) == 1005);  // depot edge
    CHECK(c(1, 3) == 1006);  // across clusters
    CHECK(c(3, 3) == 0);
    CHECK(is_penalized_edge(inst, 0, 3));
    CHECK(!is_penalized_edge(inst, 4, 3));
    CHECK_THROWS(m_penalty_costs(inst, 0));

    // two routes, two clusters: 2 + 2 penalized edges
    CHECK(count_penalized_edges(inst, {{1, 2}, {4, 3}}) == 4);
    CHECK(count_penalized_edges(inst, {{1, 2, 4, 3}, {}}) == 3);
    CHECK(count_penalized_edges(inst, {{1, 3, 2}, {4}}) == 6);

    // M exceeds the raw cost of any m-route solution: n + m edges, each at most max c
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const Instance r = oracle::random_instance(rng, 12, 4);
        double max_c = 0;
        for (int i = 0; i < r.vertices(); ++i)
            for (int j = 0; j < r.vertices(); ++j) max_c = std::max(max_c, r.cost(i, j));
        CHECK(choose_M(r) > (r.customers() + r.fleet()) * max_c);
    }
}

TEST_CASE("cluster-feasible solutions use exactly m + N penalized edges") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const Instance inst = oracle::random_instance(rng, 15, 5);
        const PathCostTable table = build_path_table(inst);
        const ExactClusterModel model(inst, table);
        const auto routes = random_routes(rng, 5, 3);
        std::vector<std::vector<int>> customers;
        int used = 0;
        for (const auto& r : routes) {
            customers.push_back(decode_customers(r, model));
            if (!r.empty()) ++used;
        }
        CHECK(count_penalized_edges(inst, customers) == used + inst.cluster_count());
        // splitting a cluster costs at least two more
        auto broken = customers;
        for (auto& r : broken)
            if (r.size() >= 3 && inst.cluster_of(r.front()) == inst.cluster_of(r[1])) {
                std::swap(r[0], r.back());
                if (!contiguous_clusters(inst, r)) CHECK(count_penalized_edges(inst, broken) >= used + inst.cluster_count() + 2);
                break;
            }
    }
}

TEST_CASE("searches on fixed customer paths") {
    Rng rng(8);
    for (int t = 0; t < 40; ++t) {
        const Instance inst = oracle::random_instance(rng, 24, 5, 10, t % 2 ? Rounding::Exact : Rounding::NearestInt);
        FixedPathModel model(inst);
        for (int k = 0; k < inst.cluster_count(); ++k) {
            std::vector<int> p(inst.cluster(k).begin(), inst.cluster(k).end());
            std::shuffle(p.begin(), p.end(), rng);
            model.set_path(k, p);
        }
        std::vector<int> units(5);
        std::iota(units.begin(), units.end(), 0);
        std::shuffle(units.begin(), units.end(), rng);

        const double start = fixed_route_cost(model, units);
        CHECK(start == doctest::Approx(route_cost(units, model).cost).epsilon(1e-12));
        endpoints_search(model, units);
        const double after_ends = fixed_route_cost(model, units);
        CHECK(after_ends <= start + 1e-9);
        intra_cluster_search(model, units);
        const double after_all = fixed_route_cost(model, units);
        CHECK(after_all <= after_ends + 1e-9);
        CHECK(!intra_cluster_search(model, units));  // fixed point

        const PathCostTable table = build_path_table(inst);
        const ExactClusterModel exact(inst, table);
        CHECK(after_all >= route_cost(units, exact).cost - 1e-9);
        CHECK(after_all >= oracle::layered_route_cost(inst, units) - 1e-9);

        // paths remain permutations of their clusters
        for (int k = 0; k < inst.cluster_count(); ++k) {
            std::vector<int> a(model.path(k).begin(), model.path(k).end());
            std::vector<int> b(inst.cluster(k).begin(), inst.cluster(k).end());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    }
}

TEST_CASE("vertex model descent on penalized costs never splits a cluster") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const Instance inst = oracle::random_instance(rng, 14, 4);
        const CostMatrix c = m_penalty_costs(inst, choose_M(inst));
        const VertexModel model(inst, c);
        std::vector<std::vector<int>> routes;
        for (const auto& r : cheapest_insertion(inst, rng)) {
            routes.emplace_back();
            for (int v : r) routes.back().push_back(VertexModel::unit_of(v));
        }
        LsOptions opt;
        opt.allow_empty_routes = false;
        LocalSearch ls(model, inst.capacity(), opt);
        ls.load(routes);
        ls.descend(rng);
        std::vector<std::vector<int>> customers;
        int used = 0;
        for (const auto& r : ls.routes()) {
            customers.push_back(decode_customers(r, model));
            if (!r.empty()) ++used;
            CHECK(contiguous_clusters(inst, customers.back()));
        }
        CHECK(count_penalized_edges(inst, customers) == used + inst.cluster_count());
    }
}
