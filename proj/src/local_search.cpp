#include "cluvrp/local_search.hpp"

#include <algorithm>

namespace cluvrp {

LocalSearch::LocalSearch(const ClusterModel& model, int capacity, LsOptions options)
    : model_(&model), capacity_(capacity), options_(std::move(options)), evaluator_(model) {}

void LocalSearch::load(std::vector<std::vector<int>> routes) {
    routes_ = std::move(routes);
    const std::size_t count = routes_.size();
    tables_.assign(count, RouteTable{});
    cost_.assign(count, 0);
    load_.assign(count, 0);
    lengths_.assign(count, 0);
    for (std::size_t r = 0; r < count; ++r) rebuild(static_cast<int>(r));
}

void LocalSearch::rebuild(int r) {
    const auto& units = routes_[r];
    lengths_[r] = static_cast<int>(units.size());
    tables_[r].build(units, *model_);
    if (units.empty()) {
        cost_[r] = 0;
        load_[r] = 0;
        return;
    }
    const Piece whole{tables_[r].segment(0, lengths_[r] - 1), false};
    const PieceEval e = evaluator_.evaluate({&whole, 1});
    cost_[r] = e.cost;
    load_[r] = e.load;
}

double LocalSearch::route_penalized(int r) const {
    const int excess = std::max(0, load_[r] - capacity_);
    return cost_[r] + (excess > 0 ? options_.penalty * excess : 0.0);
}

double LocalSearch::cost() const {
    double total = 0;
    for (double c : cost_) total += c;
    return total;
}

double LocalSearch::penalized_cost() const {
    double total = 0;
    for (int r = 0; r < route_count(); ++r) total += route_penalized(r);
    return total;
}

int LocalSearch::capacity_excess() const {
    int total = 0;
    for (int l : load_) total += std::max(0, l - capacity_);
    return total;
}

void LocalSearch::set_route(int r, std::vector<int> units) {
    routes_[r] = std::move(units);
    rebuild(r);
}

void LocalSearch::refresh_route(int r) { rebuild(r); }

// ---------------------------------------------------------------------------
// Enumeration. Order is lexicographic in (r1, r2, i, j, ...), which fixes
// tie-breaking for best_move.

void LocalSearch::for_each_move(MoveKind kind, const std::function<void(const Move&)>& fn) const {
    const int R = route_count();
    int first_empty = -1;
    for (int r = 0; r < R && first_empty < 0; ++r)
        if (lengths_[r] == 0) first_empty = r;
    // Empty routes are interchangeable; only the first one is a target.
    auto usable = [&](int r) { return lengths_[r] > 0 || r == first_empty; };

    Move m;
    m.kind = kind;
    switch (kind) {
        case MoveKind::Relocate1:
        case MoveKind::Relocate2: {
            const int len = kind == MoveKind::Relocate1 ? 1 : 2;
            for (int a = 0; a < R; ++a)
                for (int b = 0; b < R; ++b) {
                    if (a == b || lengths_[a] < len || !usable(b)) continue;
                    for (int i = 0; i + len <= lengths_[a]; ++i)
                        for (int j = 0; j <= lengths_[b]; ++j) {
                            m.r1 = a, m.r2 = b, m.i = i, m.j = j, m.len1 = len, m.len2 = 0;
                            fn(m);
                        }
                }
            break;
        }
        case MoveKind::Swap11:
        case MoveKind::Swap21:
        case MoveKind::Swap22: {
            const int l1 = kind == MoveKind::Swap11 ? 1 : 2;
            const int l2 = kind == MoveKind::Swap22 ? 2 : 1;
            const bool ordered = kind == MoveKind::Swap21;
            for (int a = 0; a < R; ++a)
                for (int b = ordered ? 0 : a + 1; b < R; ++b) {
                    if (a == b || lengths_[a] < l1 || lengths_[b] < l2) continue;
                    for (int i = 0; i + l1 <= lengths_[a]; ++i)
                        for (int j = 0; j + l2 <= lengths_[b]; ++j) {
                            m.r1 = a, m.r2 = b, m.i = i, m.j = j, m.len1 = l1, m.len2 = l2;
                            fn(m);
                        }
                }
            break;
        }
        case MoveKind::Cross: {
            for (int a = 0; a < R; ++a)
                for (int b = a + 1; b < R; ++b) {
                    if (!usable(a) || !usable(b)) continue;
                    for (int l1 = 0; l1 <= 2; ++l1)
                        for (int l2 = 0; l2 <= 2; ++l2) {
                            if (l1 + l2 == 0 || lengths_[a] < l1 || lengths_[b] < l2) continue;
                            const int rv1 = (options_.segment_reversal && l1 == 2) ? 2 : 1;
                            const int rv2 = (options_.segment_reversal && l2 == 2) ? 2 : 1;
                            for (int i = 0; i + l1 <= lengths_[a]; ++i)
                                for (int j = 0; j + l2 <= lengths_[b]; ++j)
                                    for (int x = 0; x < rv1; ++x)
                                        for (int y = 0; y < rv2; ++y) {
                                            m.r1 = a, m.r2 = b, m.i = i, m.j = j, m.len1 = l1, m.len2 = l2;
                                            m.rev1 = x == 1;
                                            m.rev2 = y == 1;
                                            fn(m);
                                        }
                        }
                }
            break;
        }
        case MoveKind::TwoOptStar:
        case MoveKind::TwoOptStarReversed: {
            const bool rev = kind == MoveKind::TwoOptStarReversed;
            for (int a = 0; a < R; ++a)
                for (int b = a + 1; b < R; ++b) {
                    if (!usable(a) || !usable(b)) continue;
                    const int la = lengths_[a];
                    const int lb = lengths_[b];
                    for (int i = 0; i <= la; ++i)
                        for (int j = 0; j <= lb; ++j) {
                            // Skip rewrites that reproduce the same pair of routes.
                            if (!rev && ((i == 0 && j == 0) || (i == la && j == lb))) continue;
                            if (rev && ((i == 0 && j == lb) || (i == la && j == 0))) continue;
                            m.r1 = a, m.r2 = b, m.i = i, m.j = j;
                            fn(m);
                        }
                }
            break;
        }
        case MoveKind::OrOpt: {
            for (int a = 0; a < R; ++a) {
                const int L = lengths_[a];
                for (int len = 1; len <= options_.max_oropt; ++len) {
                    const int rv = (options_.segment_reversal && len >= 2) ? 2 : 1;
                    const auto emit = [&](int i, int j) {
                        for (int x = 0; x < rv; ++x) {
                            m.r1 = a, m.r2 = -1, m.i = i, m.j = j, m.len1 = len, m.rev1 = x == 1;
                            fn(m);
                        }
                    };
                    // Inner index moves the far end of the skipped run, so
                    // successive candidates read neighbouring table cells.
                    for (int j = 0; j + len <= L; ++j)
                        for (int i = j + 1; i + len <= L; ++i) emit(i, j);
                    for (int i = 0; i + len <= L; ++i)
                        for (int j = i + 1; j + len <= L; ++j) emit(i, j);
                }
            }
            break;
        }
        case MoveKind::TwoOpt:
        case MoveKind::IntraSwap: {
            for (int a = 0; a < R; ++a)
                for (int i = 0; i < lengths_[a]; ++i)
                    for (int j = i + 1; j < lengths_[a]; ++j) {
                        m.r1 = a, m.r2 = -1, m.i = i, m.j = j;
                        fn(m);
                    }
            break;
        }
    }
}

std::vector<Move> LocalSearch::enumerate(MoveKind kind) const {
    std::vector<Move> out;
    for_each_move(kind, [&](const Move& m) { out.push_back(m); });
    return out;
}

// ---------------------------------------------------------------------------

std::optional<double> LocalSearch::price(const MoveShape& shape, std::array<double, 2>* costs,
                                         std::array<int, 2>* loads) {
    double delta = 0;
    for (int slot = 0; slot < shape.route_count; ++slot) {
        const int r = shape.routes[slot];
        std::array<Piece, 5> pieces;
        const int count = shape.range_count[slot];
        for (int p = 0; p < count; ++p) {
            const Range& rg = shape.ranges[slot][p];
            pieces[p] = Piece{tables_[rg.route].segment(rg.from, rg.to), rg.reversed};
        }
        if (count == 0 && !options_.allow_empty_routes && lengths_[r] > 0) return std::nullopt;
        const PieceEval e = evaluator_.evaluate({pieces.data(), static_cast<std::size_t>(count)});
        if (forbidden_load(e.load)) return std::nullopt;
        const int excess = std::max(0, e.load - capacity_);
        const double pen = e.cost + (excess > 0 ? options_.penalty * excess : 0.0);
        delta += pen - route_penalized(r);
        if (costs) (*costs)[slot] = e.cost;
        if (loads) (*loads)[slot] = e.load;
    }
    return delta;
}

std::optional<double> LocalSearch::evaluate(const Move& m) { return price(shape_of(m, lengths_)); }

std::optional<Move> LocalSearch::best_move(MoveKind kind) {
    std::optional<Move> best;
    for_each_move(kind, [&](const Move& m) {
        const auto d = price(shape_of(m, lengths_));
        if (d && (!best || *d < best->delta)) {
            best = m;
            best->delta = *d;
        }
    });
    return best;
}

std::optional<Move> LocalSearch::best_move(MoveKind kind, std::span<const int> only_routes) {
    std::vector<char> keep(route_count(), 0);
    for (int r : only_routes) keep[r] = 1;
    std::optional<Move> best;
    for_each_move(kind, [&](const Move& m) {
        if (!keep[m.r1] || (m.r2 >= 0 && !keep[m.r2])) return;
        const auto d = price(shape_of(m, lengths_));
        if (d && (!best || *d < best->delta)) {
            best = m;
            best->delta = *d;
        }
    });
    return best;
}

std::vector<int> LocalSearch::apply(const Move& m) {
    const MoveShape shape = shape_of(m, lengths_);
    auto fresh = apply_shape(shape, routes_);
    std::vector<int> touched;
    for (int slot = 0; slot < shape.route_count; ++slot) {
        const int r = shape.routes[slot];
        routes_[r] = std::move(fresh[slot]);
        touched.push_back(r);
    }
    for (int r : touched) rebuild(r);
    return touched;
}

bool LocalSearch::intra_route_search(Rng& rng, std::span<const int> routes) {
    bool improved = false;
    std::vector<MoveKind> list = options_.intra;
    while (!list.empty()) {
        const std::size_t pick = rng() % list.size();
        const auto best = best_move(list[pick], routes);
        if (best && best->delta < -kImprovementEps) {
            apply(*best);
            improved = true;
            list = options_.intra;
        } else {
            list.erase(list.begin() + static_cast<long>(pick));
        }
    }
    return improved;
}

bool LocalSearch::descend(Rng& rng) {
    std::vector<int> all(route_count());
    for (int r = 0; r < route_count(); ++r) all[r] = r;
    bool improved = intra_route_search(rng, all);
    std::vector<MoveKind> list = options_.inter;
    while (!list.empty()) {
        const std::size_t pick = rng() % list.size();
        const auto best = best_move(list[pick]);
        if (best && best->delta < -kImprovementEps) {
            const auto touched = apply(*best);
            intra_route_search(rng, touched);
            improved = true;
            list = options_.inter;
        } else {
            list.erase(list.begin() + static_cast<long>(pick));
        }
    }
    return improved;
}

}  // namespace cluvrp
