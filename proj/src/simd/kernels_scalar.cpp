#include "gmelab/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gmelab::simd {
namespace {

void cmul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void cscale_scalar(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    out[i] = cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void caxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

double max_abs_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = a[i].real() - b[i].real();
    const double di = a[i].imag() - b[i].imag();
    m = std::max(m, std::sqrt(dr * dr + di * di));
  }
  return m;
}

cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

constexpr kernel_table kScalar{
    isa::scalar, cmul_scalar, cscale_scalar, caxpy_scalar, max_abs_diff_scalar, dotc_scalar,
};

}  // namespace

const kernel_table& scalar_kernels() noexcept { return kScalar; }

}  // namespace gmelab::simd
