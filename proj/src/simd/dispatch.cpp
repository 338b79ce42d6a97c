#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cluvrp/simd/minplus.hpp"

namespace cluvrp::simd {

#if !defined(CLUVRP_HAVE_AVX2)
const MinPlusKernels* avx2_kernels() { return nullptr; }
#endif
#if !defined(CLUVRP_HAVE_NEON)
const MinPlusKernels* neon_kernels() { return nullptr; }
#endif

namespace {

const MinPlusKernels* lookup(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return &scalar_kernels();
        case Isa::Avx2: return avx2_kernels();
        case Isa::Neon: return neon_kernels();
    }
    return nullptr;
}

bool cpu_has(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const MinPlusKernels* pick_default() {
    if (const char* env = std::getenv("CLUVRP_SIMD"); env != nullptr && *env != '\0') {
        const Isa wanted = parse_isa(env);
        if (!supported(wanted))
            throw std::runtime_error(std::string("CLUVRP_SIMD=") + env + " is not supported here");
        return lookup(wanted);
    }
    for (Isa isa : {Isa::Avx2, Isa::Neon})
        if (supported(isa)) return lookup(isa);
    return &scalar_kernels();
}

std::atomic<const MinPlusKernels*> g_active{nullptr};

}  // namespace

bool supported(Isa isa) { return lookup(isa) != nullptr && cpu_has(isa); }

const MinPlusKernels& active() {
    const MinPlusKernels* k = g_active.load(std::memory_order_acquire);
    if (k == nullptr) {
        const MinPlusKernels* chosen = pick_default();
        if (g_active.compare_exchange_strong(k, chosen, std::memory_order_acq_rel)) k = chosen;
    }
    return *k;
}

void set_active(Isa isa) {
    if (!supported(isa)) throw std::invalid_argument("requested SIMD variant is not available");
    g_active.store(lookup(isa), std::memory_order_release);
}

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    if (name == "neon") return Isa::Neon;
    throw std::invalid_argument("unknown SIMD variant '" + std::string(name) + "'");
}

}  // namespace cluvrp::simd
