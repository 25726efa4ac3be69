#pragma once

// Dense complex matrices over multipartite Hilbert spaces.
//
// Subsystem ordering is most-significant-first: for dims [d0, d1, ..., d{n-1}]
// the basis state |i0 i1 ... i{n-1}> has index sum_k i_k * prod_{m>k} d_m.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gmelab {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v|
  static ComplexMatrix outer(std::span<const cplx> ket);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  cplx trace() const;
  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);
  /// this += s * other
  ComplexMatrix& add_scaled(cplx s, const ComplexMatrix& other);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Ordinary matrix product.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

enum class normalization { normalized, unnormalized };

/// A Hermitian operator on a tensor-product space. Construction checks shape,
/// Hermiticity and (when flagged) unit trace; positivity is checked on demand
/// with is_positive() since it needs a full eigendecomposition.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims,
                normalization norm = normalization::normalized);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  std::size_t subsystem_count() const noexcept { return dims_.size(); }
  bool normalized() const noexcept { return norm_ == normalization::normalized; }

  double trace() const { return m_.trace().real(); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  /// Copy divided by its trace and flagged normalized.
  DensityMatrix renormalized() const;
  /// Same matrix flagged unnormalized.
  DensityMatrix as_unnormalized() const;

  double min_eigenvalue() const;
  /// min eigenvalue >= -tol::psd * trace
  bool is_positive() const;

 private:
  ComplexMatrix m_;
  std::vector<std::size_t> dims_;
  normalization norm_;
};

bool is_hermitian(const ComplexMatrix& m, double tol);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr(a * b) for general square a, b of equal shape.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product; dims concatenate, normalized iff both inputs are.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
/// Entrywise (Schur) product.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

DensityMatrix partial_transpose(const DensityMatrix& rho, std::span<const std::size_t> subsystems);
DensityMatrix partial_transpose(const DensityMatrix& rho, std::initializer_list<std::size_t> subsystems);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> discard);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> discard);

/// Position k of the result holds subsystem perm[k] of the input.
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> perm);
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::initializer_list<std::size_t> perm);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue_hermitian(const ComplexMatrix& m);

/// Multi-index <-> flat index helpers for the ordering convention above.
std::size_t flat_index(std::span<const std::size_t> digits, std::span<const std::size_t> dims);
std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims);
std::size_t product(std::span<const std::size_t> dims);

}  // namespace gmelab
