#include "rieszgen/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace rieszgen::simd::detail {
namespace {

constexpr std::size_t kLanes = 2;

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// fmax/vmaxq treat signed zeros differently from `a > b ? a : b`, so select
// through a comparison instead.
void max(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    float64x2_t va = vld1q_f64(a + i);
    float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vbslq_f64(vcgtq_f64(va, vb), va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

void min(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    float64x2_t va = vld1q_f64(a + i);
    float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vbslq_f64(vcltq_f64(va, vb), va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void abs(const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vabsq_f64(vld1q_f64(a + i)));
  for (; i < n; ++i) out[i] = std::fabs(a[i]);
}

void scale(double c, const double* a, double* out, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vc, vld1q_f64(a + i)));
  for (; i < n; ++i) out[i] = c * a[i];
}

inline void store_mask(uint64x2_t m, std::uint8_t* out) {
  out[0] = static_cast<std::uint8_t>(vgetq_lane_u64(m, 0) & 1u);
  out[1] = static_cast<std::uint8_t>(vgetq_lane_u64(m, 1) & 1u);
}

void greater_equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store_mask(vcgeq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), out + i);
  for (; i < n; ++i) out[i] = a[i] >= b[i] ? 1 : 0;
}

void greater(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store_mask(vcgtq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), out + i);
  for (; i < n; ++i) out[i] = a[i] > b[i] ? 1 : 0;
}

void equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store_mask(vceqq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), out + i);
  for (; i < n; ++i) out[i] = a[i] == b[i] ? 1 : 0;
}

void select(const std::uint8_t* mask, const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const uint64_t lanes[2] = {mask[i] ? ~0ull : 0ull, mask[i + 1] ? ~0ull : 0ull};
    uint64x2_t keep = vld1q_u64(lanes);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(keep, vreinterpretq_u64_f64(vld1q_f64(a + i)))));
  }
  for (; i < n; ++i) out[i] = mask[i] ? a[i] : 0.0;
}

constexpr KernelTable kTable{Isa::neon, add, sub, mul, max, min, abs, scale,
                             greater_equal, greater, equal, select};

}  // namespace

const KernelTable& neon_table() noexcept { return kTable; }

}  // namespace rieszgen::simd::detail

#endif
