#include <atomic>
#include <cstdlib>
#include <string_view>

#include "autothermo/kernels.hpp"

namespace autothermo::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(AUTOTHERMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("AUTOTHERMO_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if defined(AUTOTHERMO_HAVE_AVX2)
#define AUTOTHERMO_DISPATCH(call) \
  (active_isa() == Isa::avx2 ? avx2::call : scalar::call)
#else
#define AUTOTHERMO_DISPATCH(call) scalar::call
#endif

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return AUTOTHERMO_DISPATCH(dotc(x, y));
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  return AUTOTHERMO_DISPATCH(dotu(x, y));
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  AUTOTHERMO_DISPATCH(axpy(alpha, x, y));
}

void mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  AUTOTHERMO_DISPATCH(mul(a, b, out));
}

void gemv(std::size_t rows, std::size_t cols, std::span<const cplx> a,
          std::span<const cplx> x, std::span<cplx> y) {
  AUTOTHERMO_DISPATCH(gemv(rows, cols, a, x, y));
}

void gemv_banded(std::size_t rows, std::size_t cols, std::span<const cplx> a,
                 RowExtents extents, std::span<const cplx> x, std::span<cplx> y) {
  AUTOTHERMO_DISPATCH(gemv_banded(rows, cols, a, extents, x, y));
}

#undef AUTOTHERMO_DISPATCH

}  // namespace autothermo::kernels
