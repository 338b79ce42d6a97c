#include "cluvrp/seq_concat.hpp"

#include <algorithm>

namespace cluvrp {

namespace {

// out = A (x) B in the min-plus semiring, out is A.rows x B.cols, dense.
void minplus_product(const simd::MinPlusKernels& k, MatrixView a, MatrixView b, double* out) {
    for (int i = 0; i < a.rows; ++i) k.row(a.row(i), a.cols, b.data, b.stride, b.cols, out + static_cast<long>(i) * b.cols);
}

}  // namespace

Subsequence Subsequence::single(const ClusterModel& model, int unit) {
    Subsequence s;
    const MatrixView in = model.inner(unit);
    s.first_ = s.last_ = unit;
    s.rows_ = in.rows;
    s.cols_ = in.cols;
    s.load_ = model.load(unit);
    s.cells_.resize(static_cast<std::size_t>(in.rows) * in.cols);
    for (int i = 0; i < in.rows; ++i)
        for (int j = 0; j < in.cols; ++j) s.cells_[static_cast<std::size_t>(i) * in.cols + j] = in(i, j);
    return s;
}

Subsequence concat(const Subsequence& a, const Subsequence& b, const ClusterModel& model) {
    const auto& k = simd::active();
    std::vector<double> scratch(static_cast<std::size_t>(model.max_ports()) * model.max_ports());
    const MatrixView c = model.cross(a.last_, b.first_, scratch);
    std::vector<double> t(static_cast<std::size_t>(a.rows_) * c.cols);
    minplus_product(k, a.view(), c, t.data());
    Subsequence out;
    out.first_ = a.first_;
    out.last_ = b.last_;
    out.rows_ = a.rows_;
    out.cols_ = b.cols_;
    out.load_ = a.load_ + b.load_;
    out.cells_.resize(static_cast<std::size_t>(out.rows_) * out.cols_);
    minplus_product(k, MatrixView{t.data(), a.rows_, c.cols, c.cols}, b.view(), out.cells_.data());
    return out;
}

// ---------------------------------------------------------------------------

void RouteTable::build(std::span<const int> units, const ClusterModel& model) {
    const auto& k = simd::active();
    size_ = static_cast<int>(units.size());
    units_.assign(units.begin(), units.end());
    rows_.resize(size_);
    prefix_load_.assign(size_ + 1, 0);
    for (int p = 0; p < size_; ++p) {
        rows_[p] = model.port_count(units_[p]);
        prefix_load_[p + 1] = prefix_load_[p] + model.load(units_[p]);
    }
    offsets_.assign(static_cast<std::size_t>(size_) * (size_ + 1) / 2 + 1, 0);
    std::size_t total = 0;
    for (int u = 0; u < size_; ++u)
        for (int v = u; v < size_; ++v) {
            offsets_[index(u, v)] = total;
            total += static_cast<std::size_t>(rows_[u]) * rows_[v];
        }
    cells_.resize(total);

    const int mp = model.max_ports();
    std::vector<double> scratch(static_cast<std::size_t>(mp) * mp);
    std::vector<double> t(static_cast<std::size_t>(mp) * mp);
    for (int u = 0; u < size_; ++u) {
        const MatrixView in = model.inner(units_[u]);
        double* dst = cells_.data() + offsets_[index(u, u)];
        for (int i = 0; i < in.rows; ++i)
            for (int j = 0; j < in.cols; ++j) dst[i * in.cols + j] = in(i, j);
        for (int v = u + 1; v < size_; ++v) {
            const MatrixView prev{cells_.data() + offsets_[index(u, v - 1)], rows_[u], rows_[v - 1], rows_[v - 1]};
            const MatrixView c = model.cross(units_[v - 1], units_[v], scratch);
            minplus_product(k, prev, c, t.data());
            minplus_product(k, MatrixView{t.data(), rows_[u], rows_[v], rows_[v]}, model.inner(units_[v]),
                            cells_.data() + offsets_[index(u, v)]);
        }
    }
    // Copies of the runs a neighborhood scan reads once per candidate: the
    // suffixes and the runs of at most kBand units. In the triangular layout
    // consecutive candidates find these a whole row apart.
    const auto copy_run = [&](int u, int v, std::vector<double>& into) {
        const double* src = cells_.data() + offsets_[index(u, v)];
        into.insert(into.end(), src, src + static_cast<std::size_t>(rows_[u]) * rows_[v]);
    };
    suffix_cells_.clear();
    suffix_offsets_.assign(size_, 0);
    for (int u = 0; u < size_; ++u) {
        suffix_offsets_[u] = suffix_cells_.size();
        copy_run(u, size_ - 1, suffix_cells_);
    }
    band_cells_.clear();
    band_offsets_.assign(static_cast<std::size_t>(size_) * kBand, 0);
    for (int u = 0; u < size_; ++u)
        for (int k = 0; k < kBand && u + k < size_; ++k) {
            band_offsets_[static_cast<std::size_t>(u) * kBand + k] = band_cells_.size();
            copy_run(u, u + k, band_cells_);
        }
}

SegmentView RouteTable::segment(int from, int to) const {
    const double* cells = to - from < kBand    ? band_cells_.data() + band_offsets_[from * kBand + (to - from)]
                          : to == size_ - 1 ? suffix_cells_.data() + suffix_offsets_[from]
                                            : cells_.data() + offsets_[index(from, to)];
    return SegmentView{MatrixView{cells, rows_[from], rows_[to], rows_[to]},
                       units_[from], units_[to], prefix_load_[to + 1] - prefix_load_[from]};
}

// ---------------------------------------------------------------------------

ConcatEvaluator::ConcatEvaluator(const ClusterModel& model) : model_(&model), kernels_(&simd::active()) {
    const auto mp = static_cast<std::size_t>(model.max_ports());
    a_.resize(mp);
    b_.resize(mp);
    scratch_.resize(mp * mp);
}

PieceEval ConcatEvaluator::evaluate(std::span<const Piece> pieces) {
    if (pieces.empty()) return {};
    const auto& k = *kernels_;
    int load = 0;
    double* v = a_.data();
    double* w = b_.data();

    const Piece& head = pieces.front();
    const int entry_unit = head.reversed ? head.segment.last_unit : head.segment.first_unit;
    const auto depot_in = model_->depot_costs(entry_unit);
    std::copy(depot_in.begin(), depot_in.end(), v);
    int n = static_cast<int>(depot_in.size());
    int exit_unit = -1;

    for (std::size_t p = 0; p < pieces.size(); ++p) {
        const Piece& piece = pieces[p];
        const MatrixView m = piece.segment.matrix;
        load += piece.segment.load;
        if (p > 0) {
            const int entry = piece.reversed ? piece.segment.last_unit : piece.segment.first_unit;
            const MatrixView c = model_->cross(exit_unit, entry, scratch_);
            k.row(v, n, c.data, c.stride, c.cols, w);
            std::swap(v, w);
            n = c.cols;
        }
        if (!piece.reversed) {
            k.row(v, n, m.data, m.stride, m.cols, w);
            n = m.cols;
            exit_unit = piece.segment.last_unit;
        } else {
            k.row_transposed(v, n, m.data, m.stride, m.rows, w);
            n = m.rows;
            exit_unit = piece.segment.first_unit;
        }
        std::swap(v, w);
    }
    const auto depot_out = model_->depot_costs(exit_unit);
    return {k.min_sum(v, depot_out.data(), n), load};
}

PieceEval evaluate_move_concat(std::span<const Piece> pieces, const ClusterModel& model) {
    ConcatEvaluator eval(model);
    return eval.evaluate(pieces);
}

// ---------------------------------------------------------------------------

DecodedRoute decode_route(std::span<const int> units, const ClusterModel& model) {
    DecodedRoute out;
    const int len = static_cast<int>(units.size());
    if (len == 0) return out;
    std::vector<std::vector<int>> arg_inner(len), arg_cross(len);
    std::vector<double> scratch(static_cast<std::size_t>(model.max_ports()) * model.max_ports());

    const auto d0 = model.depot_costs(units[0]);
    std::vector<double> fin(d0.begin(), d0.end());
    std::vector<double> fout;
    for (int p = 0; p < len; ++p) {
        if (p > 0) {
            const MatrixView c = model.cross(units[p - 1], units[p], scratch);
            fin.assign(c.cols, kInf);
            arg_cross[p].assign(c.cols, 0);
            for (int x = 0; x < c.rows; ++x)
                for (int y = 0; y < c.cols; ++y) {
                    const double cand = fout[x] + c(x, y);
                    if (cand < fin[y]) {
                        fin[y] = cand;
                        arg_cross[p][y] = x;
                    }
                }
        }
        const MatrixView in = model.inner(units[p]);
        fout.assign(in.cols, kInf);
        arg_inner[p].assign(in.cols, 0);
        for (int i = 0; i < in.rows; ++i)
            for (int j = 0; j < in.cols; ++j) {
                const double cand = fin[i] + in(i, j);
                if (cand < fout[j]) {
                    fout[j] = cand;
                    arg_inner[p][j] = i;
                }
            }
    }
    const auto dl = model.depot_costs(units[len - 1]);
    double best = kInf;
    int last_exit = 0;
    for (std::size_t j = 0; j < dl.size(); ++j) {
        const double cand = fout[j] + dl[j];
        if (cand < best) {
            best = cand;
            last_exit = static_cast<int>(j);
        }
    }
    out.cost = best;
    out.entry.resize(len);
    out.exit.resize(len);
    int ex = last_exit;
    for (int p = len - 1; p >= 0; --p) {
        out.exit[p] = ex;
        out.entry[p] = arg_inner[p][ex];
        if (p > 0) ex = arg_cross[p][out.entry[p]];
    }
    for (int p = 0; p < len; ++p) model.append_path(units[p], out.entry[p], out.exit[p], out.customers);
    return out;
}

RouteCost route_cost(std::span<const int> units, const ClusterModel& model) {
    if (units.empty()) return {};
    const DecodedRoute d = decode_route(units, model);
    return {d.cost, d.entry.front(), d.exit.back()};
}

std::vector<int> decode_customers(std::span<const int> units, const ClusterModel& model) {
    return decode_route(units, model).customers;
}

double sequence_cost(std::span<const int> customers, const ClusterModel& model) {
    if (customers.empty()) return 0;
    double total = model.edge(0, customers.front());
    for (std::size_t p = 1; p < customers.size(); ++p) total += model.edge(customers[p - 1], customers[p]);
    return total + model.edge(customers.back(), 0);
}

}  // namespace cluvrp
