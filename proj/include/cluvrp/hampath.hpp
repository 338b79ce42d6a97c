#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cluvrp/instance.hpp"

namespace cluvrp {

inline constexpr int kDefaultLambdaMax = 14;

// Optimal Hamiltonian path costs between every ordered pair of customers of
// one cluster, together with the paths themselves.
class ClusterPaths {
  public:
    ClusterPaths() = default;
    ClusterPaths(std::vector<int> members, std::vector<double> costs, std::vector<int> orders);

    int size() const { return static_cast<int>(members_.size()); }
    std::span<const int> members() const { return members_; }

    // Cost of the best path from members()[i] to members()[j] through all
    // other members. +inf on the diagonal unless size() == 1.
    double cost(int i, int j) const { return costs_[static_cast<std::size_t>(i) * size() + j]; }
    const std::vector<double>& matrix() const { return costs_; }

    // Customer ids of that path, first = members()[i], last = members()[j].
    std::span<const int> path(int i, int j) const;

  private:
    std::vector<int> members_;
    std::vector<double> costs_;  // size x size, row-major
    std::vector<int> orders_;    // size x size x size
};

class PathCostTable {
  public:
    PathCostTable() = default;
    explicit PathCostTable(std::vector<ClusterPaths> clusters) : clusters_(std::move(clusters)) {}

    int cluster_count() const { return static_cast<int>(clusters_.size()); }
    const ClusterPaths& cluster(int k) const { return clusters_[k]; }

    // Number of ordered endpoint pairs with a computed path: sum of l(l-1).
    long pair_count() const;

    // Wall-clock seconds spent computing the table (carried through the cache).
    double compute_seconds = 0;

  private:
    std::vector<ClusterPaths> clusters_;
};

class LambdaLimitError : public Error {
  public:
    using Error::Error;
};

// Held-Karp over (visited subset, last vertex) from every start vertex.
// Throws LambdaLimitError when the cluster is larger than lambda_max.
ClusterPaths cluster_ham_paths(std::span<const int> members, const CostMatrix& costs,
                               int lambda_max = kDefaultLambdaMax);

// Reference value by enumerating all interior orders. Only for small clusters.
double ham_path_bruteforce(std::span<const int> members, const CostMatrix& costs, int i, int j);

// All clusters of an instance, spread over `workers` threads.
PathCostTable build_path_table(const Instance& inst, int lambda_max = kDefaultLambdaMax, int workers = 1);

// --- Cache -----------------------------------------------------------------
// Text format, one record per ordered pair:
//   CLUVRP-PATHS 1
//   instance <name>
//   hash <16 hex digits>
//   seconds <compute time>
//   clusters <N>
//   cluster <k> <lambda> <member ids...>
//   <k> <i> <j> <cost> <path ids...>          (lambda > 1, i != j)
//   end
// Ids are node ids as written in the instance file (depot = 1).

std::uint64_t instance_hash(const Instance& inst);
std::string cache_file_name(const Instance& inst);
void write_path_cache(const std::string& path, const Instance& inst, const PathCostTable& table);

// Returns nullopt when the file is missing or belongs to a different instance.
std::optional<PathCostTable> read_path_cache(const std::string& path, const Instance& inst);

// Loads <cache_dir>/<cache_file_name> or computes and stores it.
PathCostTable load_or_build_path_table(const Instance& inst, const std::string& cache_dir,
                                       int lambda_max = kDefaultLambdaMax, int workers = 1,
                                       bool* cache_hit = nullptr);

}  // namespace cluvrp
