#pragma once

#include <span>
#include <vector>

#include "cluvrp/hampath.hpp"
#include "cluvrp/instance.hpp"

namespace cluvrp {

// Read-only strided view of a dense matrix.
struct MatrixView {
    const double* data = nullptr;
    int rows = 0;
    int cols = 0;
    int stride = 0;

    double operator()(int r, int c) const { return data[static_cast<long>(r) * stride + c]; }
    const double* row(int r) const { return data + static_cast<long>(r) * stride; }
};

// What the concatenation engine needs to know about the units a route is
// made of. A unit is entered at one of its ports (customers) and left at one
// of its ports; inner() holds the cheapest way through the unit between each
// pair of ports. Three models exist:
//   ExactClusterModel  unit = cluster, ports = all members, inner = optimal path table
//   FixedPathModel     unit = cluster with a fixed customer path, ports = its two ends
//   VertexModel        unit = single customer over an arbitrary cost matrix
class ClusterModel {
  public:
    virtual ~ClusterModel() = default;

    virtual int unit_count() const = 0;
    virtual std::span<const int> ports(int unit) const = 0;
    virtual MatrixView inner(int unit) const = 0;

    // Costs from the ports of `from` to the ports of `to`. The view may point
    // into `scratch`, which must hold at least max_ports()^2 values.
    virtual MatrixView cross(int from, int to, std::span<double> scratch) const = 0;

    // c(0, port) for every port of the unit (costs are symmetric).
    virtual std::span<const double> depot_costs(int unit) const = 0;

    virtual int load(int unit) const = 0;
    virtual int max_ports() const = 0;

    // Customers visited inside the unit when entering at port `entry` and
    // leaving at port `exit`.
    virtual void append_path(int unit, int entry, int exit, std::vector<int>& out) const = 0;

    // Cost of the edge between two vertices under this model's metric.
    virtual double edge(int a, int b) const = 0;

    int port_count(int unit) const { return static_cast<int>(ports(unit).size()); }
};

class ExactClusterModel final : public ClusterModel {
  public:
    ExactClusterModel(const Instance& inst, const PathCostTable& table);

    int unit_count() const override { return static_cast<int>(offset_.size()); }
    std::span<const int> ports(int unit) const override { return table_->cluster(unit).members(); }
    MatrixView inner(int unit) const override;
    MatrixView cross(int from, int to, std::span<double> scratch) const override;
    std::span<const double> depot_costs(int unit) const override;
    int load(int unit) const override { return inst_->cluster_demand(unit); }
    int max_ports() const override { return max_ports_; }
    void append_path(int unit, int entry, int exit, std::vector<int>& out) const override;
    double edge(int a, int b) const override { return inst_->cost(a, b); }

    const PathCostTable& table() const { return *table_; }

  private:
    const Instance* inst_;
    const PathCostTable* table_;
    // Costs with vertices renumbered cluster by cluster and stored so that
    // each cluster-to-cluster block is contiguous.
    std::vector<double> reordered_;
    int dim_ = 0;
    std::vector<int> offset_;
    int max_ports_ = 1;
};

class FixedPathModel final : public ClusterModel {
  public:
    explicit FixedPathModel(const Instance& inst);

    int unit_count() const override { return static_cast<int>(paths_.size()); }
    std::span<const int> ports(int unit) const override;
    MatrixView inner(int unit) const override;
    MatrixView cross(int from, int to, std::span<double> scratch) const override;
    std::span<const double> depot_costs(int unit) const override;
    int load(int unit) const override { return inst_->cluster_demand(unit); }
    int max_ports() const override { return 2; }
    void append_path(int unit, int entry, int exit, std::vector<int>& out) const override;
    double edge(int a, int b) const override { return inst_->cost(a, b); }

    // Path through the cluster, in either orientation.
    void set_path(int unit, std::span<const int> path);
    std::span<const int> path(int unit) const { return paths_[unit].order; }
    double path_cost(int unit) const { return paths_[unit].cost; }

  private:
    struct Entry {
        std::vector<int> order;
        double cost = 0;
        int ports[2] = {0, 0};
        double inner[4] = {0, kInf, kInf, 0};
        double depot[2] = {0, 0};
    };
    const Instance* inst_;
    std::vector<Entry> paths_;
};

class VertexModel final : public ClusterModel {
  public:
    // Units 0..n-1 are customers 1..n.
    VertexModel(const Instance& inst, const CostMatrix& costs);

    int unit_count() const override { return static_cast<int>(ids_.size()); }
    std::span<const int> ports(int unit) const override { return {&ids_[unit], 1}; }
    MatrixView inner(int) const override { return {&zero_, 1, 1, 1}; }
    MatrixView cross(int from, int to, std::span<double>) const override {
        return {costs_->row(ids_[from]) + ids_[to], 1, 1, 1};
    }
    std::span<const double> depot_costs(int unit) const override { return {costs_->row(0) + ids_[unit], 1}; }
    int load(int unit) const override { return inst_->demand(ids_[unit]); }
    int max_ports() const override { return 1; }
    void append_path(int unit, int, int, std::vector<int>& out) const override { out.push_back(ids_[unit]); }
    double edge(int a, int b) const override { return (*costs_)(a, b); }

    static int unit_of(int customer) { return customer - 1; }

  private:
    const Instance* inst_;
    const CostMatrix* costs_;
    std::vector<int> ids_;
    double zero_ = 0;
};

}  // namespace cluvrp
