#include "rieszgen/simd/kernels.hpp"

#include <cmath>

namespace rieszgen::simd::detail {
namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void max(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

void min(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void abs(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i]);
}

void scale(double c, const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * a[i];
}

void greater_equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] >= b[i] ? 1 : 0;
}

void greater(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > b[i] ? 1 : 0;
}

void equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] == b[i] ? 1 : 0;
}

void select(const std::uint8_t* mask, const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mask[i] ? a[i] : 0.0;
}

constexpr KernelTable kTable{Isa::scalar, add, sub, mul, max, min, abs, scale,
                             greater_equal, greater, equal, select};

}  // namespace

const KernelTable& scalar_table() noexcept { return kTable; }

}  // namespace rieszgen::simd::detail
