// Compiled with -mavx2; only reached after a runtime CPU check.
#include "cfgdw/simd/bitset_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <bit>
#include <immintrin.h>

namespace cfgdw::simd {
namespace {

void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(d, s));
    }
    for (; i < words; ++i) dst[i] |= src[i];
}

std::ptrdiff_t find_and_andnot(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                               std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i));
        __m256i r = _mm256_andnot_si256(vc, _mm256_and_si256(va, vb));
        if (!_mm256_testz_si256(r, r)) break;
    }
    for (; i < words; ++i)
        if (a[i] & b[i] & ~c[i]) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

std::ptrdiff_t find_andnot(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i r = _mm256_andnot_si256(vb, va);
        if (!_mm256_testz_si256(r, r)) break;
    }
    for (; i < words; ++i)
        if (a[i] & ~b[i]) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

std::size_t popcount(const std::uint64_t* a, std::size_t words) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words; ++i) n += static_cast<std::size_t>(std::popcount(a[i]));
    return n;
}

} // namespace

const BitsetKernels& avx2_kernels() {
    static const BitsetKernels k{Isa::Avx2, or_into, find_and_andnot, find_andnot, popcount};
    return k;
}

} // namespace cfgdw::simd

#endif
