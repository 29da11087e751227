#include "autothermo/kernels.hpp"

namespace autothermo::kernels::scalar {

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
  }
}

void mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void gemv(std::size_t rows, std::size_t cols, std::span<const cplx> a,
          std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dotu(a.subspan(r * cols, cols), x);
  }
}

void gemv_banded(std::size_t rows, std::size_t cols, std::span<const cplx> a,
                 RowExtents extents, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t lo = extents.first[r];
    const std::size_t hi = extents.last[r];
    if (lo > hi) {
      y[r] = 0.0;
      continue;
    }
    y[r] = dotu(a.subspan(r * cols + lo, hi - lo + 1), x.subspan(lo, hi - lo + 1));
  }
}

}  // namespace autothermo::kernels::scalar
