#include <cstdlib>
#include <string>

#include "rieszgen/error.hpp"
#include "rieszgen/simd/kernels.hpp"

namespace rieszgen::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error("unsupported_isa", "ISA not available: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: return detail::avx2_table();
#endif
#if defined(__aarch64__)
    case Isa::neon: return detail::neon_table();
#endif
    default: return detail::scalar_table();
  }
}

namespace {

const KernelTable& select_active() noexcept {
  if (const char* forced = std::getenv("RIESZGEN_ISA")) {
    const std::string_view want(forced);
    for (Isa isa : supported_isas()) {
      if (isa_name(isa) == want) return kernels_for(isa);
    }
  }
  const auto isas = supported_isas();
  return kernels_for(isas.back());
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = select_active();
  return table;
}

}  // namespace rieszgen::simd
