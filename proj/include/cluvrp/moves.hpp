#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace cluvrp {

// Route-level move families over units (clusters, or customers in vertex mode).
enum class MoveKind {
    Relocate1,           // one unit to another route
    Relocate2,           // two consecutive units to another route
    Swap11,              // exchange one unit with one unit of another route
    Swap21,              // two consecutive units against one
    Swap22,              // two against two
    TwoOptStar,          // exchange route tails
    TwoOptStarReversed,  // head of one route joined to the reversed head of the other
    Cross,               // exchange segments of <= 2 units, optionally reversed (Cross / I-Cross)
    OrOpt,               // move a segment of 1..3 units within its route
    TwoOpt,              // reverse a segment within its route
    IntraSwap,           // exchange two units of the same route
};

std::string_view to_string(MoveKind kind);
MoveKind move_kind_from_string(std::string_view name);
bool is_inter_route(MoveKind kind);

struct Move {
    MoveKind kind = MoveKind::Relocate1;
    int r1 = -1;
    int r2 = -1;
    int i = 0;  // position in r1
    int j = 0;  // position in r2 (inter) / second position or insertion index (intra)
    int len1 = 0;
    int len2 = 0;
    bool rev1 = false;  // segment of r1 is inserted reversed
    bool rev2 = false;
    double delta = 0;
};

// Inclusive run [from, to] of an existing route, possibly traversed backwards.
struct Range {
    int route = -1;
    int from = 0;
    int to = 0;
    bool reversed = false;
};

// The routes a move rewrites, each as a concatenation of existing runs.
struct MoveShape {
    int route_count = 0;
    std::array<int, 2> routes{-1, -1};
    std::array<std::array<Range, 5>, 2> ranges{};
    std::array<int, 2> range_count{0, 0};

    void add(int slot, int route, int from, int to, bool reversed = false) {
        if (from > to) return;
        ranges[slot][range_count[slot]++] = Range{route, from, to, reversed};
    }
};

// lengths[r] = number of units in route r before the move.
MoveShape shape_of(const Move& m, const std::vector<int>& lengths);

// Unit lists of the rewritten routes.
std::array<std::vector<int>, 2> apply_shape(const MoveShape& shape, const std::vector<std::vector<int>>& routes);

}  // namespace cluvrp
