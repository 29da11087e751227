#pragma once

// Data-parallel complex kernels used in the hot loops of propagation and
// analysis. Every kernel has a portable scalar reference in `scalar::` and,
// on x86-64, an AVX2/FMA variant in `avx2::`. The unqualified entry points
// dispatch once, at first use, to the best variant the CPU supports.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace autothermo::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

/// Inclusive column range [first, last] holding every nonzero of each row.
/// An all-zero row has first > last.
struct RowExtents {
  std::span<const std::uint32_t> first;
  std::span<const std::uint32_t> last;
};

#define AUTOTHERMO_KERNEL_SET                                                         \
  /* sum_i conj(x_i) * y_i */                                                         \
  cplx dotc(std::span<const cplx> x, std::span<const cplx> y);                        \
  /* sum_i x_i * y_i */                                                               \
  cplx dotu(std::span<const cplx> x, std::span<const cplx> y);                        \
  /* y += alpha * x */                                                                \
  void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);                  \
  /* out_i = a_i * b_i */                                                             \
  void mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);    \
  /* y = A x, A row-major rows x cols */                                              \
  void gemv(std::size_t rows, std::size_t cols, std::span<const cplx> a,              \
            std::span<const cplx> x, std::span<cplx> y);                              \
  /* y = A x touching only the per-row nonzero extents */                             \
  void gemv_banded(std::size_t rows, std::size_t cols, std::span<const cplx> a,       \
                   RowExtents extents, std::span<const cplx> x, std::span<cplx> y);

namespace scalar {
AUTOTHERMO_KERNEL_SET
}  // namespace scalar

#if defined(AUTOTHERMO_HAVE_AVX2)
namespace avx2 {
AUTOTHERMO_KERNEL_SET
}  // namespace avx2
#endif

AUTOTHERMO_KERNEL_SET

#undef AUTOTHERMO_KERNEL_SET

/// True when the AVX2 variants were compiled in and the CPU has AVX2+FMA.
bool avx2_available();

/// ISA picked by the dispatcher. Honors AUTOTHERMO_SIMD=scalar|avx2 from the
/// environment at first use.
Isa active_isa();

/// Overrides the dispatcher choice (tests, benchmarking). Requesting avx2 on a
/// machine without it falls back to scalar.
void set_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace autothermo::kernels
