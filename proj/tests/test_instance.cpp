#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "cluvrp/instance.hpp"
#include "oracles.hpp"

using namespace cluvrp;

namespace {

// depot + 4 customers in two sets
const char* kSmall = R"(NAME : small
TYPE : CluVRP
DIMENSION : 5
CAPACITY : 10
VEHICLES : 2
GVRP_SETS : 2
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 6 8
4 -3 4
5 1 1
DEMAND_SECTION
1 0
2 2
3 3
4 4
5 1
GVRP_SET_SECTION
1 2 3 -1
2 4 5 -1
DEPOT_SECTION
1
-1
EOF
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto p = text.find(from);
    REQUIRE(p != std::string::npos);
    return text.replace(p, from.size(), to);
}

int error_line(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const InstanceError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const InstanceError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("parse a small instance") {
    const Instance inst = parse_instance(kSmall);
    CHECK(inst.name() == "small");
    CHECK(inst.customers() == 4);
    CHECK(inst.cluster_count() == 2);
    CHECK(inst.fleet() == 2);
    CHECK(inst.capacity() == 10);
    CHECK(inst.cluster_of(0) == -1);
    CHECK(inst.cluster_of(1) == 0);
    CHECK(inst.cluster_of(3) == 1);
    CHECK(inst.cluster_demand(0) == 5);
    CHECK(inst.cluster_demand(1) == 5);
    CHECK(inst.cost(0, 1) == 5);
    CHECK(inst.cost(1, 2) == 5);
    CHECK(inst.cost(1, 3) == 6);
}

TEST_CASE("round trip through write_instance") {
    const Instance a = parse_instance(kSmall);
    const Instance b = parse_instance(write_instance(a));
    CHECK(a == b);
    CHECK(write_instance(b) == write_instance(a));

    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const Instance r = oracle::random_instance(rng, 12, 4, 10, t % 2 ? Rounding::Exact : Rounding::NearestInt);
        CHECK(parse_instance(write_instance(r)) == r);
    }
    const Instance g = generate_clustered(random_cvrp("G-x", 50, 100, 30, 9, Rounding::Exact), 3.5, 2);
    const Instance g2 = parse_instance(write_instance(g));
    CHECK(g2 == g);
    REQUIRE(g2.theta());
    CHECK(*g2.theta() == 3.5);
}

TEST_CASE("missing vehicles defaults to a first-fit packing") {
    const std::string text = replace(kSmall, "VEHICLES : 2\n", "");
    CHECK(parse_instance(text).fleet() == 1);
}

TEST_CASE("a header with 101 vertices, 34 sets and 4 vehicles") {
    InstanceData d;
    d.name = "CMT-101";
    d.capacity = 200;
    d.fleet = 4;
    d.coords.push_back({35, 35});
    d.demand.push_back(0);
    for (int v = 1; v <= 100; ++v) {
        d.coords.push_back({static_cast<double>(v % 17), static_cast<double>(v / 17)});
        d.demand.push_back(1 + v % 5);
    }
    d.clusters.assign(34, {});
    for (int v = 1; v <= 100; ++v) d.clusters[(v - 1) % 34].push_back(v);
    const std::string text = write_instance(Instance(d));
    CHECK(text.find("DIMENSION : 101") != std::string::npos);
    const Instance inst = parse_instance(text);
    CHECK(inst.vertices() == 101);
    CHECK(inst.cluster_count() == 34);
    CHECK(inst.fleet() == 4);
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("duplicate membership") {
        const std::string bad = replace(kSmall, "2 4 5 -1", "2 4 5 3 -1");
        CHECK(error_line(bad) == 22);
        CHECK(error_text(bad).find("duplicate cluster membership") != std::string::npos);
    }
    SUBCASE("non-positive demand") {
        const std::string bad = replace(kSmall, "4 4\n", "4 0\n");
        CHECK(error_line(bad) == 18);
        CHECK(error_text(bad).find("positive") != std::string::npos);
    }
    SUBCASE("cluster heavier than a vehicle") {
        const std::string bad = replace(kSmall, "CAPACITY : 10", "CAPACITY : 4");
        CHECK(error_line(bad) == 21);
        CHECK(error_text(bad).find("demand") != std::string::npos);
    }
    SUBCASE("malformed coordinate") {
        const std::string bad = replace(kSmall, "3 6 8", "3 6 eight");
        CHECK(error_line(bad) == 11);
    }
    SUBCASE("unknown keyword") {
        const std::string bad = replace(kSmall, "TYPE : CluVRP", "COLOUR : blue");
        CHECK(error_line(bad) == 2);
    }
    SUBCASE("customer in no set") {
        const std::string bad = replace(kSmall, "2 4 5 -1", "2 4 -1");
        CHECK_THROWS_AS(parse_instance(bad), InstanceError);
    }
}

TEST_CASE("writing refuses invalid data") {
    InstanceData d = parse_instance(kSmall).data();
    d.clusters.clear();
    CHECK_THROWS_AS(write_instance(d), InstanceError);
}

TEST_CASE("edge costs") {
    CHECK(euclidean_cost({0, 0}, {3, 4}, Rounding::NearestInt) == 5);
    CHECK(euclidean_cost({0, 0}, {1, 1}, Rounding::NearestInt) == 1);
    CHECK(euclidean_cost({0, 0}, {1, 1}, Rounding::Exact) == std::sqrt(2.0));
    const Instance inst = parse_instance(kSmall);
    for (int i = 0; i < inst.vertices(); ++i) {
        CHECK(edge_cost(inst, i, i) == 0);
        for (int j = 0; j < inst.vertices(); ++j) CHECK(edge_cost(inst, i, j) == edge_cost(inst, j, i));
    }
}

TEST_CASE("triangle inequality holds for exact costs") {
    Rng rng(11);
    const Instance inst = oracle::random_instance(rng, 15, 5, 10, Rounding::Exact);
    int violations = 0;
    for (int i = 0; i < inst.vertices(); ++i)
        for (int j = 0; j < inst.vertices(); ++j)
            for (int k = 0; k < inst.vertices(); ++k)
                if (inst.cost(i, j) > inst.cost(i, k) + inst.cost(k, j) + 1e-9) ++violations;
    CHECK(violations == 0);
}

TEST_CASE("cluster counts") {
    // Li 560 and 600 at theta 5, and the CMT rows of the third GVRP set (theta 3).
    CHECK(clustered_count(560, 5) == 113);
    CHECK(clustered_count(600, 5) == 121);
    CHECK(clustered_count(100, 3) == 34);
    CHECK(clustered_count(120, 3) == 41);
    CHECK(clustered_count(150, 3) == 51);
    CHECK(clustered_count(199, 3) == 67);
    CHECK(clustered_count(10, 1) == 10);
    CHECK(infer_theta(560, 113) == 5);
    CHECK(infer_theta(100, 34) == 3);
}

TEST_CASE("generate_clustered") {
    const Instance base = random_cvrp("Li-560", 560, 1000, 60, 4);
    const Instance inst = generate_clustered(base, 5, 1);
    CHECK(inst.cluster_count() == 113);
    CHECK(write_instance(inst).find("GVRP_SETS : 113") != std::string::npos);

    SUBCASE("partition and capacity") {
        std::set<int> seen;
        int total = 0;
        for (int k = 0; k < inst.cluster_count(); ++k) {
            CHECK(!inst.cluster(k).empty());
            CHECK(inst.cluster_demand(k) <= inst.capacity());
            for (int v : inst.cluster(k)) {
                CHECK(seen.insert(v).second);
                ++total;
            }
        }
        CHECK(total == inst.customers());
    }
    SUBCASE("deterministic for a fixed seed") {
        CHECK(generate_clustered(base, 5, 1) == inst);
        CHECK(!(generate_clustered(base, 5, 2) == inst));
    }
    SUBCASE("theta 1 gives singletons") {
        const Instance s = generate_clustered(random_cvrp("s", 30, 100, 20, 5), 1, 3);
        CHECK(s.cluster_count() == 30);
        for (int k = 0; k < s.cluster_count(); ++k) CHECK(s.cluster(k).size() == 1);
    }
    SUBCASE("repair keeps tight clusters feasible") {
        const Instance tight = generate_clustered(random_cvrp("t", 80, 100, 25, 8), 6, 5);
        for (int k = 0; k < tight.cluster_count(); ++k) CHECK(tight.cluster_demand(k) <= 100);
        CHECK(static_cast<long>(tight.fleet()) * tight.capacity() >= tight.total_demand());
    }
}

TEST_CASE("partition property over random instances") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 20);
        const int N = 1 + static_cast<int>(rng() % n);
        const Instance inst = oracle::random_instance(rng, n, N);
        std::vector<int> count(inst.vertices(), 0);
        for (int k = 0; k < inst.cluster_count(); ++k)
            for (int v : inst.cluster(k)) ++count[v];
        CHECK(count[0] == 0);
        for (int v = 1; v < inst.vertices(); ++v) CHECK(count[v] == 1);
    }
}
