#include "cluvrp/simd/minplus.hpp"

#include <algorithm>
#include <limits>

namespace cluvrp::simd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void row_scalar(const double* v, int n, const double* m, int stride, int cols, double* out) {
    std::fill(out, out + cols, kInf);
    for (int i = 0; i < n; ++i) {
        const double vi = v[i];
        const double* mi = m + static_cast<long>(i) * stride;
        for (int j = 0; j < cols; ++j) out[j] = std::min(out[j], vi + mi[j]);
    }
}

void row_transposed_scalar(const double* v, int n, const double* m, int stride, int cols,
                           double* out) {
    for (int j = 0; j < cols; ++j) {
        const double* mj = m + static_cast<long>(j) * stride;
        double best = kInf;
        for (int i = 0; i < n; ++i) best = std::min(best, v[i] + mj[i]);
        out[j] = best;
    }
}

double min_sum_scalar(const double* a, const double* b, int n) {
    double best = kInf;
    for (int i = 0; i < n; ++i) best = std::min(best, a[i] + b[i]);
    return best;
}

}  // namespace

const MinPlusKernels& scalar_kernels() {
    static const MinPlusKernels k{Isa::Scalar, "scalar", row_scalar, row_transposed_scalar,
                                  min_sum_scalar};
    return k;
}

}  // namespace cluvrp::simd
