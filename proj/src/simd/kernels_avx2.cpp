// AVX2 + FMA variants. This translation unit is built with -mavx2 -mfma and
// must only be entered through the dispatcher after a CPU feature check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "gmelab/simd/kernels.hpp"

namespace gmelab::simd {
namespace {

// Two interleaved complex doubles per register: [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (ar + i ai)(br + i bi) lane-wise.
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void cmul_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, mul2(load2(a + i), load2(b + i)));
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(std::fma(ar, br, -ai * bi), std::fma(ai, br, ar * bi));
  }
}

void cscale_avx2(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
  const __m256d av = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, mul2(load2(x + i), av));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    out[i] = cplx(std::fma(xr, alpha.real(), -xi * alpha.imag()),
                  std::fma(xi, alpha.real(), xr * alpha.imag()));
  }
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d av = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), mul2(load2(x + i), av)));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(std::fma(xr, alpha.real(), -xi * alpha.imag()),
                 std::fma(xi, alpha.real(), xr * alpha.imag()));
  }
}

double max_abs_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(load2(a + i), load2(b + i));
    const __m256d sq = _mm256_mul_pd(d, d);
    acc = _mm256_max_pd(acc, _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double dr = a[i].real() - b[i].real();
    const double di = a[i].imag() - b[i].imag();
    m = std::max(m, std::sqrt(dr * dr + di * di));
  }
  return m;
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  // re part: sum of a*b over both lanes; im part: sum of (a_im b_re - a_re b_im).
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = load2(a + i);
    const __m256d bv = load2(b + i);
    re_acc = _mm256_fmadd_pd(av, bv, re_acc);
    im_acc = _mm256_fmadd_pd(_mm256_permute_pd(av, 0x5), bv, im_acc);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, re_acc);
  _mm256_store_pd(m, im_acc);
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (m[0] - m[1]) + (m[2] - m[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

constexpr kernel_table kAvx2{
    isa::avx2, cmul_avx2, cscale_avx2, caxpy_avx2, max_abs_diff_avx2, dotc_avx2,
};

}  // namespace

const kernel_table& avx2_kernel_table() noexcept { return kAvx2; }

}  // namespace gmelab::simd
