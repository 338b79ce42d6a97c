#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "cluvrp/hampath.hpp"
#include "oracles.hpp"

using namespace cluvrp;

namespace {

CostMatrix random_costs(Rng& rng, int dim, bool exact) {
    std::vector<Point> pts;
    for (int i = 0; i < dim; ++i)
        pts.push_back({static_cast<double>(rng() % 1000), static_cast<double>(rng() % 1000)});
    CostMatrix c(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            c(i, j) = euclidean_cost(pts[i], pts[j], exact ? Rounding::Exact : Rounding::NearestInt);
    return c;
}

std::vector<int> members_of(int lam, int offset = 1) {
    std::vector<int> m(lam);
    for (int i = 0; i < lam; ++i) m[i] = offset + i;
    return m;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("cluvrp-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("tiny clusters") {
    Rng rng(1);
    const CostMatrix c = random_costs(rng, 6, false);
    SUBCASE("one member") {
        const auto p = cluster_ham_paths(std::vector<int>{3}, c);
        CHECK(p.size() == 1);
        CHECK(p.cost(0, 0) == 0);
    }
    SUBCASE("two members") {
        const std::vector<int> m{1, 4};
        const auto p = cluster_ham_paths(m, c);
        CHECK(p.cost(0, 1) == c(1, 4));
        CHECK(p.cost(1, 0) == c(1, 4));
        CHECK(p.cost(0, 0) == kInf);
        CHECK(ham_path_bruteforce(m, c, 0, 1) == c(1, 4));
    }
    SUBCASE("three members: the middle vertex is forced") {
        const std::vector<int> m{1, 2, 5};
        const auto p = cluster_ham_paths(m, c);
        CHECK(p.cost(0, 1) == c(1, 5) + c(5, 2));
        CHECK(ham_path_bruteforce(m, c, 0, 1) == c(1, 5) + c(5, 2));
        const auto path = p.path(0, 1);
        CHECK(std::vector<int>(path.begin(), path.end()) == std::vector<int>{1, 5, 2});
    }
}

TEST_CASE("dynamic program equals permutation enumeration") {
    Rng rng(2);
    for (int t = 0; t < 120; ++t) {
        const int lam = 2 + t % 7;  // 2..8
        const CostMatrix c = random_costs(rng, lam + 1, t % 3 == 0);
        const auto m = members_of(lam);
        const auto p = cluster_ham_paths(m, c);
        for (int i = 0; i < lam; ++i)
            for (int j = 0; j < lam; ++j) {
                if (i == j) continue;
                CHECK(p.cost(i, j) == doctest::Approx(oracle::ham_path_perm(m, c, i, j)).epsilon(1e-12));
                CHECK(p.cost(i, j) == p.cost(j, i));
                // the stored path realizes the cost
                const auto path = p.path(i, j);
                REQUIRE(static_cast<int>(path.size()) == lam);
                CHECK(path.front() == m[i]);
                CHECK(path.back() == m[j]);
                double sum = 0;
                for (int k = 1; k < lam; ++k) sum += c(path[k - 1], path[k]);
                CHECK(sum == doctest::Approx(p.cost(i, j)).epsilon(1e-12));
            }
    }
}

TEST_CASE("library brute force agrees with the test oracle up to 9 members") {
    Rng rng(8);
    const CostMatrix c = random_costs(rng, 10, false);
    const auto m = members_of(9);
    const auto p = cluster_ham_paths(m, c);
    for (int i = 0; i < 9; i += 4)
        for (int j = 0; j < 9; j += 3)
            if (i != j) {
                CHECK(ham_path_bruteforce(m, c, i, j) == oracle::ham_path_perm(m, c, i, j));
                CHECK(p.cost(i, j) == ham_path_bruteforce(m, c, i, j));
            }
}

TEST_CASE("cluster size limit") {
    Rng rng(3);
    const CostMatrix c = random_costs(rng, 20, false);
    CHECK_THROWS_AS(cluster_ham_paths(members_of(15), c), LambdaLimitError);
    CHECK_NOTHROW(cluster_ham_paths(members_of(6), c, 6));
    CHECK_THROWS_AS(cluster_ham_paths(members_of(7), c, 6), LambdaLimitError);
}

TEST_CASE("table over an instance") {
    Rng rng(4);
    const Instance inst = oracle::random_instance(rng, 30, 7);
    const PathCostTable serial = build_path_table(inst);
    const PathCostTable parallel = build_path_table(inst, kDefaultLambdaMax, 3);
    REQUIRE(serial.cluster_count() == 7);
    long expected = 0;
    for (int k = 0; k < inst.cluster_count(); ++k) {
        const long lam = static_cast<long>(inst.cluster(k).size());
        expected += lam * (lam - 1);
        CHECK(serial.cluster(k).matrix() == parallel.cluster(k).matrix());
    }
    CHECK(serial.pair_count() == expected);
}

TEST_CASE("cache file") {
    Rng rng(5);
    const Instance inst = oracle::random_instance(rng, 25, 6, 10, Rounding::Exact);
    const auto dir = scratch_dir("cache");

    bool hit = true;
    const PathCostTable built = load_or_build_path_table(inst, dir.string(), kDefaultLambdaMax, 1, &hit);
    CHECK(!hit);
    const auto file = dir / cache_file_name(inst);
    REQUIRE(std::filesystem::exists(file));
    {
        std::ifstream in(file);
        std::string header;
        std::getline(in, header);
        CHECK(header == "CLUVRP-PATHS 1");
    }

    const PathCostTable again = load_or_build_path_table(inst, dir.string(), kDefaultLambdaMax, 1, &hit);
    CHECK(hit);
    CHECK(again.compute_seconds == built.compute_seconds);
    for (int k = 0; k < inst.cluster_count(); ++k) {
        CHECK(again.cluster(k).matrix() == built.cluster(k).matrix());
        const int lam = again.cluster(k).size();
        for (int i = 0; i < lam; ++i)
            for (int j = 0; j < lam; ++j)
                if (i != j) {
                    const auto a = again.cluster(k).path(i, j);
                    const auto b = built.cluster(k).path(i, j);
                    CHECK(std::vector<int>(a.begin(), a.end()) == std::vector<int>(b.begin(), b.end()));
                }
    }

    SUBCASE("another instance does not match the file") {
        const Instance other = oracle::random_instance(rng, 25, 6);
        CHECK(!read_path_cache(file.string(), other));
    }
    SUBCASE("missing file") { CHECK(!read_path_cache((dir / "none.paths").string(), inst)); }
    SUBCASE("truncated file") {
        std::string text;
        {
            std::ifstream in(file);
            text.assign(std::istreambuf_iterator<char>(in), {});
        }
        std::ofstream(file, std::ios::trunc) << text.substr(0, text.size() / 2);
        CHECK_THROWS_AS(read_path_cache(file.string(), inst), Error);
    }
}
