#include "cfgdw/simd/bitset_kernels.hpp"

#include <bit>

namespace cfgdw::simd {
namespace {

void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

std::ptrdiff_t find_and_andnot(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                               std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & b[i] & ~c[i]) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

std::ptrdiff_t find_andnot(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & ~b[i]) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

std::size_t popcount(const std::uint64_t* a, std::size_t words) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words; ++i) n += static_cast<std::size_t>(std::popcount(a[i]));
    return n;
}

} // namespace

const BitsetKernels& scalar_kernels() {
    static const BitsetKernels k{Isa::Scalar, or_into, find_and_andnot, find_andnot, popcount};
    return k;
}

} // namespace cfgdw::simd
