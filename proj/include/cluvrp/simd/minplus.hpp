#pragma once

// Min-plus (tropical) kernels behind the subsequence concatenation engine.
//
// Every kernel computes sums of the form a + b and takes minima. Addition is
// evaluated in the same order by every variant and min is exact, so all
// variants are bitwise identical on inputs without NaN. Infinity is a valid
// operand and stands for "no path".

#include <string_view>

namespace cluvrp::simd {

enum class Isa { Scalar, Avx2, Neon };

struct MinPlusKernels {
    Isa isa;
    const char* name;

    // out[j] = min_i (v[i] + m[i * stride + j])   for i < n, j < cols
    void (*row)(const double* v, int n, const double* m, int stride, int cols, double* out);

    // out[j] = min_i (v[i] + m[j * stride + i])   for i < n, j < cols
    void (*row_transposed)(const double* v, int n, const double* m, int stride, int cols,
                           double* out);

    // min_i (a[i] + b[i])
    double (*min_sum)(const double* a, const double* b, int n);
};

const MinPlusKernels& scalar_kernels();

// nullptr when the variant was not compiled in.
const MinPlusKernels* avx2_kernels();
const MinPlusKernels* neon_kernels();

bool supported(Isa isa);

// Kernels in use. Picks the widest ISA the CPU supports on first call; the
// CLUVRP_SIMD environment variable (scalar | avx2 | neon) overrides it.
const MinPlusKernels& active();

// Throws std::invalid_argument if the ISA is unavailable on this build/CPU.
void set_active(Isa isa);

Isa parse_isa(std::string_view name);

}  // namespace cluvrp::simd
