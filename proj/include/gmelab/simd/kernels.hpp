#pragma once

// Data-parallel complex kernels behind the dense linear algebra.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is picked once at first use from the CPU feature bits;
// setting GMELAB_SIMD=scalar in the environment pins the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace gmelab::simd {

using cplx = std::complex<double>;

enum class isa { scalar, avx2 };

std::string_view to_string(isa id) noexcept;

struct kernel_table {
  isa id;
  // out[i] = a[i] * b[i]
  void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[i] = alpha * x[i]
  void (*cscale)(cplx alpha, const cplx* x, cplx* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i a[i] * conj(b[i])
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
};

const kernel_table& scalar_kernels() noexcept;

/// nullptr when the library was built without AVX2 support or the CPU lacks it.
const kernel_table* avx2_kernels() noexcept;

/// The table used by the span wrappers below.
const kernel_table& active() noexcept;

inline void hadamard(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  active().cmul(a.data(), b.data(), out.data(), out.size());
}

inline void scale(cplx alpha, std::span<const cplx> x, std::span<cplx> out) {
  active().cscale(alpha, x.data(), out.data(), out.size());
}

inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().caxpy(alpha, x.data(), y.data(), y.size());
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

inline cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dotc(a.data(), b.data(), a.size());
}

}  // namespace gmelab::simd
