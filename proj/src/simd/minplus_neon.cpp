#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "cluvrp/simd/minplus.hpp"

namespace cluvrp::simd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void row_neon(const double* v, int n, const double* m, int stride, int cols, double* out) {
    int j = 0;
    for (; j + 2 <= cols; j += 2) {
        float64x2_t acc = vdupq_n_f64(kInf);
        for (int i = 0; i < n; ++i) {
            const float64x2_t vi = vdupq_n_f64(v[i]);
            acc = vminq_f64(acc, vaddq_f64(vi, vld1q_f64(m + static_cast<long>(i) * stride + j)));
        }
        vst1q_f64(out + j, acc);
    }
    for (; j < cols; ++j) {
        double best = kInf;
        for (int i = 0; i < n; ++i) best = std::min(best, v[i] + m[static_cast<long>(i) * stride + j]);
        out[j] = best;
    }
}

double dot_min(const double* a, const double* b, int n) {
    int i = 0;
    double best = kInf;
    if (n >= 2) {
        float64x2_t acc = vdupq_n_f64(kInf);
        for (; i + 2 <= n; i += 2) acc = vminq_f64(acc, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        best = vminvq_f64(acc);
    }
    for (; i < n; ++i) best = std::min(best, a[i] + b[i]);
    return best;
}

void row_transposed_neon(const double* v, int n, const double* m, int stride, int cols,
                         double* out) {
    for (int j = 0; j < cols; ++j) out[j] = dot_min(v, m + static_cast<long>(j) * stride, n);
}

}  // namespace

const MinPlusKernels* neon_kernels() {
    static const MinPlusKernels k{Isa::Neon, "neon", row_neon, row_transposed_neon, dot_min};
    return &k;
}

}  // namespace cluvrp::simd
