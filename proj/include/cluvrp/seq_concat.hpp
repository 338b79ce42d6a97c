#pragma once

// Subsequence concatenation engine.
//
// For a run of consecutive units sigma, S(sigma)[i][j] is the cost of the
// cheapest path entering the first unit at port i, visiting every customer of
// every unit in order, and leaving the last unit at port j. Two runs combine
// by a min-plus product through the connecting edges:
//
//   S(a + b)[i][j] = min_{x, y}  S(a)[i][x] + c(x, y) + S(b)[y][j]
//
// A route is depot -> sigma -> depot. After tabulating S for every run of
// consecutive units of a route (RouteTable), the cost of any route assembled
// from a bounded number of such runs takes a bounded number of vector/matrix
// min-plus steps, independent of route length.

#include <span>
#include <vector>

#include "cluvrp/cluster_model.hpp"
#include "cluvrp/simd/minplus.hpp"

namespace cluvrp {

class Subsequence {
  public:
    Subsequence() = default;

    static Subsequence single(const ClusterModel& model, int unit);

    int first_unit() const { return first_; }
    int last_unit() const { return last_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int load() const { return load_; }
    double at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * cols_ + j]; }
    MatrixView view() const { return {cells_.data(), rows_, cols_, cols_}; }

  private:
    friend Subsequence concat(const Subsequence&, const Subsequence&, const ClusterModel&);
    int first_ = -1;
    int last_ = -1;
    int rows_ = 0;
    int cols_ = 0;
    int load_ = 0;
    std::vector<double> cells_;
};

Subsequence concat(const Subsequence& a, const Subsequence& b, const ClusterModel& model);

// Tabulated S of a run of consecutive units.
struct SegmentView {
    MatrixView matrix;
    int first_unit = -1;
    int last_unit = -1;
    int load = 0;
};

// S for every run u..v (0 <= u <= v < size) of one route, built in
// lexicographic order: S(u..v+1) = S(u..v) + S(v+1).
class RouteTable {
  public:
    RouteTable() = default;
    RouteTable(std::span<const int> units, const ClusterModel& model) { build(units, model); }

    void build(std::span<const int> units, const ClusterModel& model);
    int size() const { return size_; }
    SegmentView segment(int from, int to) const;

  private:
    static constexpr int kBand = 3;
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from) * size_ - static_cast<std::size_t>(from) * (from - 1) / 2 + (to - from);
    }
    int size_ = 0;
    std::vector<double> cells_;
    std::vector<std::size_t> offsets_;
    std::vector<int> units_;
    std::vector<int> prefix_load_;
    std::vector<int> rows_;  // ports of unit at position p
    std::vector<double> suffix_cells_;
    std::vector<std::size_t> suffix_offsets_;
    std::vector<double> band_cells_;
    std::vector<std::size_t> band_offsets_;
};

// One run of a route being recombined, optionally traversed backwards.
struct Piece {
    SegmentView segment;
    bool reversed = false;
};

struct PieceEval {
    double cost = 0;
    int load = 0;
};

// Evaluates depot -> pieces... -> depot by vector propagation. Holds scratch
// buffers, so one evaluator per thread.
class ConcatEvaluator {
  public:
    explicit ConcatEvaluator(const ClusterModel& model);

    PieceEval evaluate(std::span<const Piece> pieces);
    const ClusterModel& model() const { return *model_; }

  private:
    const ClusterModel* model_;
    const simd::MinPlusKernels* kernels_;
    std::vector<double> a_, b_, scratch_;
};

// Convenience wrapper around ConcatEvaluator.
PieceEval evaluate_move_concat(std::span<const Piece> pieces, const ClusterModel& model);

struct RouteCost {
    double cost = 0;
    int entry_port = -1;  // port of the first unit where the route enters, -1 if empty
    int exit_port = -1;   // port of the last unit where it leaves
};

// Optimal cost of depot -> units... -> depot, computed from scratch.
RouteCost route_cost(std::span<const int> units, const ClusterModel& model);

struct DecodedRoute {
    double cost = 0;
    std::vector<int> entry;      // chosen entry port per unit
    std::vector<int> exit;       // chosen exit port per unit
    std::vector<int> customers;  // full visiting order, depot excluded
};

// Layered shortest path with argmin backtracking; expands each unit's path.
DecodedRoute decode_route(std::span<const int> units, const ClusterModel& model);

std::vector<int> decode_customers(std::span<const int> units, const ClusterModel& model);

// Cost of visiting the vertices in order, starting and ending at the depot.
double sequence_cost(std::span<const int> customers, const ClusterModel& model);

}  // namespace cluvrp
