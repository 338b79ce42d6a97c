#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "cluvrp/simd/minplus.hpp"

namespace cluvrp::simd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double hmin(__m256d x) {
    __m128d lo = _mm256_castpd256_pd128(x);
    __m128d hi = _mm256_extractf128_pd(x, 1);
    lo = _mm_min_pd(lo, hi);
    lo = _mm_min_sd(lo, _mm_unpackhi_pd(lo, lo));
    return _mm_cvtsd_f64(lo);
}

void row_avx2(const double* v, int n, const double* m, int stride, int cols, double* out) {
    int j = 0;
    // Two accumulators cover the common cluster sizes (<= 8 ports) in one pass.
    for (; j + 8 <= cols; j += 8) {
        __m256d acc0 = _mm256_set1_pd(kInf);
        __m256d acc1 = acc0;
        for (int i = 0; i < n; ++i) {
            const __m256d vi = _mm256_set1_pd(v[i]);
            const double* mi = m + static_cast<long>(i) * stride + j;
            acc0 = _mm256_min_pd(acc0, _mm256_add_pd(vi, _mm256_loadu_pd(mi)));
            acc1 = _mm256_min_pd(acc1, _mm256_add_pd(vi, _mm256_loadu_pd(mi + 4)));
        }
        _mm256_storeu_pd(out + j, acc0);
        _mm256_storeu_pd(out + j + 4, acc1);
    }
    for (; j + 4 <= cols; j += 4) {
        __m256d acc = _mm256_set1_pd(kInf);
        for (int i = 0; i < n; ++i) {
            const __m256d vi = _mm256_set1_pd(v[i]);
            acc = _mm256_min_pd(acc, _mm256_add_pd(vi, _mm256_loadu_pd(m + static_cast<long>(i) * stride + j)));
        }
        _mm256_storeu_pd(out + j, acc);
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
    if (n >= 4) {
        __m256d acc = _mm256_set1_pd(kInf);
        for (; i + 4 <= n; i += 4)
            acc = _mm256_min_pd(acc, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        best = hmin(acc);
    }
    for (; i < n; ++i) best = std::min(best, a[i] + b[i]);
    return best;
}

void row_transposed_avx2(const double* v, int n, const double* m, int stride, int cols,
                         double* out) {
    for (int j = 0; j < cols; ++j) out[j] = dot_min(v, m + static_cast<long>(j) * stride, n);
}

}  // namespace

const MinPlusKernels* avx2_kernels() {
    static const MinPlusKernels k{Isa::Avx2, "avx2", row_avx2, row_transposed_avx2, dot_min};
    return &k;
}

}  // namespace cluvrp::simd
