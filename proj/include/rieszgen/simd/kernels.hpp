#pragma once

// Elementwise double-precision kernels behind the lattice operations.
//
// Every variant must produce results bitwise identical to the scalar
// reference: the kernels are purely elementwise, use no FMA contraction,
// and follow the scalar selection rules exactly:
//   max(a, b) = a > b ? a : b
//   min(a, b) = a < b ? a : b
//   abs(a)    = a with the sign bit cleared
// No reductions here; sums stay scalar.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rieszgen::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

using BinaryKernel = void (*)(const double* a, const double* b, double* out, std::size_t n);
using UnaryKernel = void (*)(const double* a, double* out, std::size_t n);
using ScaleKernel = void (*)(double c, const double* a, double* out, std::size_t n);
using CompareKernel = void (*)(const double* a, const double* b, std::uint8_t* out, std::size_t n);
// out[i] = mask[i] ? a[i] : 0.0
using SelectKernel = void (*)(const std::uint8_t* mask, const double* a, double* out, std::size_t n);

struct KernelTable {
  Isa isa;
  BinaryKernel add;
  BinaryKernel sub;
  BinaryKernel mul;
  BinaryKernel max;
  BinaryKernel min;
  UnaryKernel abs;
  ScaleKernel scale;
  CompareKernel greater_equal;
  CompareKernel greater;
  CompareKernel equal;
  SelectKernel select;
};

// True if the ISA was compiled in and the running CPU supports it.
bool isa_supported(Isa isa) noexcept;

// All ISAs usable on this machine, scalar first.
std::vector<Isa> supported_isas();

// Table for a specific ISA; throws rieszgen::Error if unsupported.
const KernelTable& kernels_for(Isa isa);

// The table used by the library. Chosen once: the best supported ISA, unless
// the RIESZGEN_ISA environment variable names another supported one.
const KernelTable& active_kernels() noexcept;

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(__aarch64__)
const KernelTable& neon_table() noexcept;
#endif
}  // namespace detail

}  // namespace rieszgen::simd
