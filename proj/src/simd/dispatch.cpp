#include "cfgdw/error.hpp"
#include "cfgdw/simd/bitset_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace cfgdw::simd {
namespace {

std::atomic<const BitsetKernels*> g_active{nullptr};

const BitsetKernels& detect() {
    if (const char* env = std::getenv("CFGDW_ISA"); env && std::string_view(env) == "scalar") return scalar_kernels();
    if (isa_supported(Isa::Avx2)) return kernels_for(Isa::Avx2);
    return scalar_kernels();
}

} // namespace

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

const BitsetKernels& kernels_for(Isa isa) {
    if (!isa_supported(isa)) throw Error(std::string("instruction set not supported: ") + std::string(to_string(isa)));
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

const BitsetKernels& active_kernels() {
    const BitsetKernels* k = g_active.load(std::memory_order_acquire);
    if (!k) {
        k = &detect();
        g_active.store(k, std::memory_order_release);
    }
    return *k;
}

void force_isa(Isa isa) { g_active.store(&kernels_for(isa), std::memory_order_release); }

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

} // namespace cfgdw::simd
