#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cluvrp/common.hpp"

namespace cluvrp {

enum class Rounding {
    NearestInt,  // TSPLIB EUC_2D: nint(sqrt(dx^2 + dy^2))
    Exact,       // unrounded Euclidean distance
};

struct Point {
    double x = 0;
    double y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

// Dense symmetric cost matrix over vertices 0..n (0 is the depot).
class CostMatrix {
  public:
    CostMatrix() = default;
    explicit CostMatrix(int dimension) : dim_(dimension), cells_(static_cast<std::size_t>(dimension) * dimension, 0.0) {}

    int dimension() const { return dim_; }
    double operator()(int i, int j) const { return cells_[static_cast<std::size_t>(i) * dim_ + j]; }
    double& operator()(int i, int j) { return cells_[static_cast<std::size_t>(i) * dim_ + j]; }
    const double* row(int i) const { return cells_.data() + static_cast<std::size_t>(i) * dim_; }
    double max_cost() const;
    double mean_offdiagonal() const;
    bool is_symmetric() const;

  private:
    int dim_ = 0;
    std::vector<double> cells_;
};

double euclidean_cost(Point a, Point b, Rounding rounding);

// Raw instance description; Instance validates it and derives costs.
struct InstanceData {
    std::string name;
    std::vector<Point> coords;     // index 0 = depot, 1..n = customers
    std::vector<int> demand;       // same indexing, demand[0] = 0
    int capacity = 0;
    int fleet = 0;
    std::vector<std::vector<int>> clusters;  // customer ids in 1..n
    Rounding rounding = Rounding::NearestInt;
    std::optional<double> theta;   // mean cluster size the instance was generated with, if known
};

class InstanceError : public Error {
  public:
    explicit InstanceError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Immutable CluVRP instance. Construction validates the partition, demand and
// capacity invariants and precomputes the cost matrix.
class Instance {
  public:
    explicit Instance(InstanceData data);

    const std::string& name() const { return data_.name; }
    int customers() const { return static_cast<int>(data_.coords.size()) - 1; }
    int vertices() const { return static_cast<int>(data_.coords.size()); }
    int capacity() const { return data_.capacity; }
    int fleet() const { return data_.fleet; }
    int cluster_count() const { return static_cast<int>(data_.clusters.size()); }
    Rounding rounding() const { return data_.rounding; }
    std::optional<double> theta() const { return data_.theta; }

    Point coord(int v) const { return data_.coords[v]; }
    int demand(int v) const { return data_.demand[v]; }
    std::span<const int> cluster(int k) const { return data_.clusters[k]; }
    int cluster_of(int v) const { return cluster_of_[v]; }  // -1 for the depot
    int cluster_demand(int k) const { return cluster_demand_[k]; }
    int max_cluster_size() const;
    long total_demand() const;

    const CostMatrix& costs() const { return costs_; }
    double cost(int i, int j) const { return costs_(i, j); }

    const InstanceData& data() const { return data_; }
    friend bool operator==(const Instance& a, const Instance& b);

  private:
    InstanceData data_;
    std::vector<int> cluster_of_;
    std::vector<int> cluster_demand_;
    CostMatrix costs_;
};

inline double edge_cost(const Instance& inst, int i, int j) { return inst.cost(i, j); }

Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);
std::string write_instance(const Instance& inst);

// Serialization refuses invalid data (e.g. no clusters) instead of writing a
// file parse_instance would reject.
std::string write_instance(const InstanceData& data);

// Number of clusters produced for n customers and mean size theta:
// min(n, ceil((n + 1) / theta)), i.e. vertices including the depot over theta.
int clustered_count(int customers, double theta);

// Inverse of clustered_count for reporting: the largest integer theta that
// yields the given cluster count, or n / N rounded when none does.
double infer_theta(int customers, int clusters);

// Groups the customers of a CVRP instance (clusters ignored) into
// clustered_count(n, theta) geographically coherent clusters.
Instance generate_clustered(const Instance& cvrp, double theta, std::uint64_t seed);

// Uniform random CVRP instance with singleton clusters, for desk-scale benchmarks.
Instance random_cvrp(const std::string& name, int customers, int capacity, int max_demand,
                     std::uint64_t seed, Rounding rounding = Rounding::NearestInt);

// Smallest fleet for which first-fit decreasing packs all cluster demands.
int ffd_fleet(const InstanceData& data);

}  // namespace cluvrp
