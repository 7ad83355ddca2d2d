// Compiled with -mavx2 (and without -mfma). Only reached after a runtime
// CPU check in dispatch.cpp.

#include "rieszgen/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace rieszgen::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

template <class Op>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op,
                   double (*tail)(double, double)) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, op(va, vb));
  }
  for (; i < n; ++i) out[i] = tail(a[i], b[i]);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); },
         [](double x, double y) { return x + y; });
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); },
         [](double x, double y) { return x - y; });
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); },
         [](double x, double y) { return x * y; });
}

// vmaxpd(x, y) returns x > y ? x : y, including the signed-zero case.
void max(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_max_pd(x, y); },
         [](double x, double y) { return x > y ? x : y; });
}

void min(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_min_pd(x, y); },
         [](double x, double y) { return x < y ? x : y; });
}

void abs(const double* a, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = std::fabs(a[i]);
}

void scale(double c, const double* a, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vc, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = c * a[i];
}

template <int Predicate>
inline void compare(const double* a, const double* b, std::uint8_t* out, std::size_t n,
                    bool (*tail)(double, double)) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d c = _mm256_cmp_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), Predicate);
    const int bits = _mm256_movemask_pd(c);
    out[i] = static_cast<std::uint8_t>(bits & 1);
    out[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  for (; i < n; ++i) out[i] = tail(a[i], b[i]) ? 1 : 0;
}

void greater_equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  compare<_CMP_GE_OQ>(a, b, out, n, [](double x, double y) { return x >= y; });
}

void greater(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  compare<_CMP_GT_OQ>(a, b, out, n, [](double x, double y) { return x > y; });
}

void equal(const double* a, const double* b, std::uint8_t* out, std::size_t n) {
  compare<_CMP_EQ_OQ>(a, b, out, n, [](double x, double y) { return x == y; });
}

void select(const std::uint8_t* mask, const double* a, double* out, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    std::int32_t packed;
    std::memcpy(&packed, mask + i, sizeof(packed));
    __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    __m256i keep = _mm256_cmpgt_epi64(wide, zero);
    _mm256_storeu_pd(out + i, _mm256_and_pd(_mm256_castsi256_pd(keep), _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = mask[i] ? a[i] : 0.0;
}

constexpr KernelTable kTable{Isa::avx2, add, sub, mul, max, min, abs, scale,
                             greater_equal, greater, equal, select};

}  // namespace

const KernelTable& avx2_table() noexcept { return kTable; }

}  // namespace rieszgen::simd::detail

#endif
