// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include "autothermo/kernels.hpp"

namespace autothermo::kernels::avx2 {
namespace {

// A __m256d holds two interleaved complex numbers (re0, im0, re1, im1).
inline const double* raw(std::span<const cplx> v) {
  return reinterpret_cast<const double*>(v.data());
}
inline double* raw(std::span<cplx> v) { return reinterpret_cast<double*>(v.data()); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (ar*br - ai*bi, ai*br + ar*bi) per complex lane.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// Accumulates the lane products needed by both dot variants:
// straight = (xr*yr, xi*yi, ...), crossed = (xr*yi, xi*yr, ...).
struct DotAccum {
  __m256d straight = _mm256_setzero_pd();
  __m256d crossed = _mm256_setzero_pd();
};

inline void accumulate(const double* x, const double* y, std::size_t n, DotAccum& acc) {
  std::size_t i = 0;
  __m256d s1 = _mm256_setzero_pd();
  __m256d c1 = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d xa = _mm256_loadu_pd(x + 2 * i);
    const __m256d ya = _mm256_loadu_pd(y + 2 * i);
    const __m256d xb = _mm256_loadu_pd(x + 2 * i + 4);
    const __m256d yb = _mm256_loadu_pd(y + 2 * i + 4);
    acc.straight = _mm256_fmadd_pd(xa, ya, acc.straight);
    acc.crossed = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), acc.crossed);
    s1 = _mm256_fmadd_pd(xb, yb, s1);
    c1 = _mm256_fmadd_pd(xb, _mm256_permute_pd(yb, 0x5), c1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d xa = _mm256_loadu_pd(x + 2 * i);
    const __m256d ya = _mm256_loadu_pd(y + 2 * i);
    acc.straight = _mm256_fmadd_pd(xa, ya, acc.straight);
    acc.crossed = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), acc.crossed);
  }
  acc.straight = _mm256_add_pd(acc.straight, s1);
  acc.crossed = _mm256_add_pd(acc.crossed, c1);
}

// Built inside each call: a namespace-scope vector constant would run AVX code
// during static initialization, before the dispatcher has checked the CPU.
inline __m256d even_plus() { return _mm256_setr_pd(1.0, -1.0, 1.0, -1.0); }

cplx dotu_raw(const double* x, const double* y, std::size_t n) {
  DotAccum acc;
  accumulate(x, y, n, acc);
  // re = sum(xr*yr) - sum(xi*yi); im = sum(xr*yi) + sum(xi*yr)
  double re = hsum(_mm256_mul_pd(acc.straight, even_plus()));
  double im = hsum(acc.crossed);
  for (std::size_t i = n & ~std::size_t{1}; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    const double yr = y[2 * i], yi = y[2 * i + 1];
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

}  // namespace

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  const std::size_t n = x.size();
  DotAccum acc;
  accumulate(raw(x), raw(y), n, acc);
  // re = sum(xr*yr) + sum(xi*yi); im = sum(xr*yi) - sum(xi*yr)
  double re = hsum(acc.straight);
  double im = hsum(_mm256_mul_pd(acc.crossed, even_plus()));
  const double* xp = raw(x);
  const double* yp = raw(y);
  for (std::size_t i = n & ~std::size_t{1}; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    const double yr = yp[2 * i], yi = yp[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  return dotu_raw(raw(x), raw(y), x.size());
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  const double* xp = raw(x);
  double* yp = raw(y);
  const __m256d av = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, cmul(xv, av)));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  const std::size_t n = a.size();
  const double* ap = raw(a);
  const double* bp = raw(b);
  double* op = raw(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ap + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bp + 2 * i);
    _mm256_storeu_pd(op + 2 * i, cmul(av, bv));
  }
  for (; i < n; ++i) {
    out[i] = a[i] * b[i];
  }
}

void gemv(std::size_t rows, std::size_t cols, std::span<const cplx> a,
          std::span<const cplx> x, std::span<cplx> y) {
  const double* ap = raw(a);
  const double* xp = raw(x);
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dotu_raw(ap + 2 * r * cols, xp, cols);
  }
}

void gemv_banded(std::size_t rows, std::size_t cols, std::span<const cplx> a,
                 RowExtents extents, std::span<const cplx> x, std::span<cplx> y) {
  const double* ap = raw(a);
  const double* xp = raw(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t lo = extents.first[r];
    const std::size_t hi = extents.last[r];
    if (lo > hi) {
      y[r] = 0.0;
      continue;
    }
    y[r] = dotu_raw(ap + 2 * (r * cols + lo), xp + 2 * lo, hi - lo + 1);
  }
}

}  // namespace autothermo::kernels::avx2
