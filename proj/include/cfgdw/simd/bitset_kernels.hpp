#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cfgdw::simd {

// Word-level bitset kernels used by the decomposition validator. Each
// instruction set provides the same table; results must be identical.

enum class Isa { Scalar, Avx2 };

struct BitsetKernels {
    Isa isa;
    /// dst |= src
    void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    /// Index of the first word where a & b & ~c is non-zero, or -1.
    std::ptrdiff_t (*find_and_andnot)(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                                      std::size_t words);
    /// Index of the first word where a & ~b is non-zero, or -1.
    std::ptrdiff_t (*find_andnot)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
    /// Number of set bits.
    std::size_t (*popcount)(const std::uint64_t* a, std::size_t words);
};

const BitsetKernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const BitsetKernels& avx2_kernels();
#endif

bool isa_supported(Isa isa);
const BitsetKernels& kernels_for(Isa isa);

/// Kernels selected at first use: AVX2 when the CPU has it, else scalar.
/// The environment variable CFGDW_ISA=scalar forces the scalar path.
const BitsetKernels& active_kernels();
/// Overrides the selection (tests and benchmarks). Throws if unsupported.
void force_isa(Isa isa);

std::string_view to_string(Isa isa);

} // namespace cfgdw::simd
