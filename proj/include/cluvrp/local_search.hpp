#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cluvrp/common.hpp"
#include "cluvrp/moves.hpp"
#include "cluvrp/seq_concat.hpp"

namespace cluvrp {

struct LsOptions {
    std::vector<MoveKind> inter{MoveKind::Relocate1, MoveKind::Relocate2, MoveKind::Swap11,
                                MoveKind::Swap21,    MoveKind::Swap22,    MoveKind::TwoOptStar};
    std::vector<MoveKind> intra{MoveKind::OrOpt, MoveKind::TwoOpt, MoveKind::IntraSwap};
    // Infeasible loads are rejected outright; otherwise they cost penalty * excess.
    bool hard_capacity = true;
    double penalty = 0;
    // In vertex mode under M-penalties the number of used vehicles stays fixed.
    bool allow_empty_routes = true;
    int max_oropt = 3;
    // Also try reversed segments in Cross and Or-opt.
    bool segment_reversal = false;
};

// Route-level local search over the units of a ClusterModel. Every route
// keeps a RouteTable; moves are priced by concatenating tabulated runs, so a
// candidate costs a bounded number of min-plus steps whatever the route length.
class LocalSearch {
  public:
    LocalSearch(const ClusterModel& model, int capacity, LsOptions options);

    // Route slots are fixed from here on; pad with empty routes to allow
    // opening new vehicles.
    void load(std::vector<std::vector<int>> routes);
    const std::vector<std::vector<int>>& routes() const { return routes_; }
    int route_count() const { return static_cast<int>(routes_.size()); }

    double route_cost(int r) const { return cost_[r]; }
    int route_load(int r) const { return load_[r]; }
    double route_penalized(int r) const;
    double cost() const;            // sum of route costs
    double penalized_cost() const;  // plus capacity penalties
    int capacity_excess() const;
    void set_penalty(double penalty) { options_.penalty = penalty; }
    const LsOptions& options() const { return options_; }

    void for_each_move(MoveKind kind, const std::function<void(const Move&)>& fn) const;
    std::vector<Move> enumerate(MoveKind kind) const;

    // Penalized cost change; nullopt when the move is forbidden (hard
    // capacity, or emptying a route when that is disallowed).
    std::optional<double> evaluate(const Move& m);

    // Lowest delta over the whole neighborhood, first in enumeration order on ties.
    std::optional<Move> best_move(MoveKind kind);
    std::optional<Move> best_move(MoveKind kind, std::span<const int> only_routes);

    // Returns the rewritten route indices.
    std::vector<int> apply(const Move& m);

    // Replaces a route wholesale (perturbation, external edits).
    void set_route(int r, std::vector<int> units);
    // Re-tabulates a route after its units' model data changed.
    void refresh_route(int r);

    // Random-order descent over the intra-route kinds on the given routes,
    // best improvement per neighborhood. Returns true if anything improved.
    bool intra_route_search(Rng& rng, std::span<const int> routes);

    // Inter-route neighborhood list: pick a random neighborhood, apply its best
    // move if improving (then run the intra-route search on the touched routes
    // and reset the list), otherwise drop it. Returns true if anything improved.
    bool descend(Rng& rng);

  private:
    void rebuild(int r);
    std::optional<double> price(const MoveShape& shape, std::array<double, 2>* costs = nullptr,
                                std::array<int, 2>* loads = nullptr);
    bool forbidden_load(int load) const { return options_.hard_capacity && load > capacity_; }

    const ClusterModel* model_;
    int capacity_;
    LsOptions options_;
    ConcatEvaluator evaluator_;
    std::vector<std::vector<int>> routes_;
    std::vector<RouteTable> tables_;
    std::vector<double> cost_;
    std::vector<int> load_;
    std::vector<int> lengths_;
};

}  // namespace cluvrp
