#include "cluvrp/cluster_model.hpp"

#include <algorithm>

namespace cluvrp {

ExactClusterModel::ExactClusterModel(const Instance& inst, const PathCostTable& table)
    : inst_(&inst), table_(&table) {
    if (table.cluster_count() != inst.cluster_count()) throw Error("path table does not match instance");
    if (!inst.costs().is_symmetric()) throw Error("the concatenation engine requires symmetric costs");
    std::vector<int> order{0};
    for (int k = 0; k < table.cluster_count(); ++k) {
        offset_.push_back(static_cast<int>(order.size()));
        const auto members = table.cluster(k).members();
        order.insert(order.end(), members.begin(), members.end());
        max_ports_ = std::max(max_ports_, static_cast<int>(members.size()));
    }
    dim_ = static_cast<int>(order.size());
    if (dim_ != inst.vertices()) throw Error("path table does not cover every customer");
    // Band of rows of cluster f, then block by block: entry (i, j) of
    // block (f, t) sits at start(f, t) + i * |t| + j.
    std::vector<int> first{0}, size{1};
    for (int k = 0; k < table.cluster_count(); ++k) {
        first.push_back(offset_[k]);
        size.push_back(table.cluster(k).size());
    }
    reordered_.resize(static_cast<std::size_t>(dim_) * dim_);
    for (std::size_t f = 0; f < first.size(); ++f)
        for (std::size_t t = 0; t < first.size(); ++t) {
            double* block = reordered_.data() + static_cast<std::size_t>(first[f]) * dim_ +
                            static_cast<std::size_t>(size[f]) * first[t];
            for (int i = 0; i < size[f]; ++i)
                for (int j = 0; j < size[t]; ++j) block[i * size[t] + j] = inst.cost(order[first[f] + i], order[first[t] + j]);
        }
}

MatrixView ExactClusterModel::inner(int unit) const {
    const auto& c = table_->cluster(unit);
    return {c.matrix().data(), c.size(), c.size(), c.size()};
}

MatrixView ExactClusterModel::cross(int from, int to, std::span<double>) const {
    const int rows = table_->cluster(from).size();
    const int cols = table_->cluster(to).size();
    const double* base = reordered_.data() + static_cast<std::size_t>(offset_[from]) * dim_ +
                         static_cast<std::size_t>(rows) * offset_[to];
    return {base, rows, cols, cols};
}

std::span<const double> ExactClusterModel::depot_costs(int unit) const {
    return {reordered_.data() + offset_[unit], static_cast<std::size_t>(table_->cluster(unit).size())};
}

void ExactClusterModel::append_path(int unit, int entry, int exit, std::vector<int>& out) const {
    const auto path = table_->cluster(unit).path(entry, exit);
    out.insert(out.end(), path.begin(), path.end());
}

// ---------------------------------------------------------------------------

FixedPathModel::FixedPathModel(const Instance& inst) : inst_(&inst), paths_(inst.cluster_count()) {
    for (int k = 0; k < inst.cluster_count(); ++k) set_path(k, inst.cluster(k));
}

void FixedPathModel::set_path(int unit, std::span<const int> path) {
    Entry& e = paths_[unit];
    e.order.assign(path.begin(), path.end());
    e.cost = 0;
    for (std::size_t p = 1; p < e.order.size(); ++p) e.cost += inst_->cost(e.order[p - 1], e.order[p]);
    e.ports[0] = e.order.front();
    e.ports[1] = e.order.back();
    if (e.order.size() == 1) {
        e.inner[0] = 0;
    } else {
        e.inner[0] = kInf;
        e.inner[1] = e.cost;
        e.inner[2] = e.cost;
        e.inner[3] = kInf;
    }
    e.depot[0] = inst_->cost(0, e.ports[0]);
    e.depot[1] = inst_->cost(0, e.ports[1]);
}

std::span<const int> FixedPathModel::ports(int unit) const {
    const Entry& e = paths_[unit];
    return {e.ports, e.order.size() == 1 ? 1u : 2u};
}

MatrixView FixedPathModel::inner(int unit) const {
    const int p = port_count(unit);
    return {paths_[unit].inner, p, p, p};
}

MatrixView FixedPathModel::cross(int from, int to, std::span<double> scratch) const {
    const auto a = ports(from);
    const auto b = ports(to);
    const int cols = static_cast<int>(b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int j = 0; j < cols; ++j) scratch[i * cols + j] = inst_->cost(a[i], b[j]);
    return {scratch.data(), static_cast<int>(a.size()), cols, cols};
}

std::span<const double> FixedPathModel::depot_costs(int unit) const {
    return {paths_[unit].depot, static_cast<std::size_t>(port_count(unit))};
}

void FixedPathModel::append_path(int unit, int entry, int, std::vector<int>& out) const {
    const auto& order = paths_[unit].order;
    if (entry == 0) out.insert(out.end(), order.begin(), order.end());
    else out.insert(out.end(), order.rbegin(), order.rend());
}

// ---------------------------------------------------------------------------

VertexModel::VertexModel(const Instance& inst, const CostMatrix& costs) : inst_(&inst), costs_(&costs) {
    if (costs.dimension() != inst.vertices()) throw Error("cost matrix does not match instance");
    for (int v = 1; v <= inst.customers(); ++v) ids_.push_back(v);
}

}  // namespace cluvrp
