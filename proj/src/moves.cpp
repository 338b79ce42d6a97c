#include "cluvrp/moves.hpp"

#include <stdexcept>
#include <string>

namespace cluvrp {

namespace {
constexpr std::array<std::pair<MoveKind, std::string_view>, 11> kNames{{
    {MoveKind::Relocate1, "relocate1"},
    {MoveKind::Relocate2, "relocate2"},
    {MoveKind::Swap11, "swap11"},
    {MoveKind::Swap21, "swap21"},
    {MoveKind::Swap22, "swap22"},
    {MoveKind::TwoOptStar, "2opt*"},
    {MoveKind::TwoOptStarReversed, "2opt*-rev"},
    {MoveKind::Cross, "cross"},
    {MoveKind::OrOpt, "or-opt"},
    {MoveKind::TwoOpt, "2opt"},
    {MoveKind::IntraSwap, "swap"},
}};
}  // namespace

std::string_view to_string(MoveKind kind) {
    for (auto [k, name] : kNames)
        if (k == kind) return name;
    return "?";
}

MoveKind move_kind_from_string(std::string_view name) {
    for (auto [k, n] : kNames)
        if (n == name) return k;
    throw std::invalid_argument("unknown move kind '" + std::string(name) + "'");
}

bool is_inter_route(MoveKind kind) {
    switch (kind) {
        case MoveKind::OrOpt:
        case MoveKind::TwoOpt:
        case MoveKind::IntraSwap: return false;
        default: return true;
    }
}

MoveShape shape_of(const Move& m, const std::vector<int>& lengths) {
    MoveShape s;
    const int a = m.r1;
    const int b = m.r2;
    switch (m.kind) {
        case MoveKind::Relocate1:
        case MoveKind::Relocate2:
        case MoveKind::Swap11:
        case MoveKind::Swap21:
        case MoveKind::Swap22:
        case MoveKind::Cross: {
            const int la = lengths[a];
            const int lb = lengths[b];
            s.route_count = 2;
            s.routes = {a, b};
            s.add(0, a, 0, m.i - 1);
            s.add(0, b, m.j, m.j + m.len2 - 1, m.rev2);
            s.add(0, a, m.i + m.len1, la - 1);
            s.add(1, b, 0, m.j - 1);
            s.add(1, a, m.i, m.i + m.len1 - 1, m.rev1);
            s.add(1, b, m.j + m.len2, lb - 1);
            break;
        }
        case MoveKind::TwoOptStar: {
            s.route_count = 2;
            s.routes = {a, b};
            s.add(0, a, 0, m.i - 1);
            s.add(0, b, m.j, lengths[b] - 1);
            s.add(1, b, 0, m.j - 1);
            s.add(1, a, m.i, lengths[a] - 1);
            break;
        }
        case MoveKind::TwoOptStarReversed: {
            s.route_count = 2;
            s.routes = {a, b};
            s.add(0, a, 0, m.i - 1);
            s.add(0, b, 0, m.j - 1, true);
            s.add(1, a, m.i, lengths[a] - 1, true);
            s.add(1, b, m.j, lengths[b] - 1);
            break;
        }
        case MoveKind::OrOpt: {
            // Segment [i, i+len1-1] is reinserted at index j of the remaining route.
            s.route_count = 1;
            s.routes = {a, -1};
            const int len = m.len1;
            const int last = lengths[a] - 1;
            if (m.j < m.i) {
                s.add(0, a, 0, m.j - 1);
                s.add(0, a, m.i, m.i + len - 1, m.rev1);
                s.add(0, a, m.j, m.i - 1);
                s.add(0, a, m.i + len, last);
            } else {
                s.add(0, a, 0, m.i - 1);
                s.add(0, a, m.i + len, m.j + len - 1);
                s.add(0, a, m.i, m.i + len - 1, m.rev1);
                s.add(0, a, m.j + len, last);
            }
            break;
        }
        case MoveKind::TwoOpt: {
            s.route_count = 1;
            s.routes = {a, -1};
            s.add(0, a, 0, m.i - 1);
            s.add(0, a, m.i, m.j, true);
            s.add(0, a, m.j + 1, lengths[a] - 1);
            break;
        }
        case MoveKind::IntraSwap: {
            s.route_count = 1;
            s.routes = {a, -1};
            s.add(0, a, 0, m.i - 1);
            s.add(0, a, m.j, m.j);
            s.add(0, a, m.i + 1, m.j - 1);
            s.add(0, a, m.i, m.i);
            s.add(0, a, m.j + 1, lengths[a] - 1);
            break;
        }
    }
    return s;
}

std::array<std::vector<int>, 2> apply_shape(const MoveShape& shape, const std::vector<std::vector<int>>& routes) {
    std::array<std::vector<int>, 2> out;
    for (int slot = 0; slot < shape.route_count; ++slot) {
        for (int p = 0; p < shape.range_count[slot]; ++p) {
            const Range& r = shape.ranges[slot][p];
            const auto& src = routes[r.route];
            if (!r.reversed) {
                for (int q = r.from; q <= r.to; ++q) out[slot].push_back(src[q]);
            } else {
                for (int q = r.to; q >= r.from; --q) out[slot].push_back(src[q]);
            }
        }
    }
    return out;
}

}  // namespace cluvrp
