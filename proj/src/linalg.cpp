#include "gmelab/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "gmelab/error.hpp"
#include "gmelab/simd/kernels.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw error(errc::shape_mismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

// Row-major strides for the most-significant-first convention.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

void check_subsystems(std::span<const std::size_t> subs, std::size_t n) {
  for (std::size_t s : subs) {
    if (s >= n) {
      throw error(errc::index_out_of_range,
                  "subsystem " + std::to_string(s) + " of " + std::to_string(n));
    }
  }
}

// For every flat index, the sum of digit*stride over the selected subsystems.
std::vector<std::size_t> selected_offsets(std::span<const std::size_t> dims,
                                          std::span<const std::size_t> subs) {
  const std::size_t d = product(dims);
  const auto st = strides_of(dims);
  std::vector<std::size_t> off(d, 0);
  for (std::size_t s : subs) {
    for (std::size_t i = 0; i < d; ++i) off[i] += ((i / st[s]) % dims[s]) * st[s];
  }
  return off;
}

using EigenRowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

// ---- ComplexMatrix -------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw error(errc::shape_mismatch, std::to_string(data_.size()) + " entries for " +
                                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> ket) {
  const std::size_t n = ket.size();
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (ket[r] == cplx{}) continue;
    for (std::size_t c = 0; c < n; ++c) m(r, c) = ket[r] * std::conj(ket[c]);
  }
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) { return add_scaled(1.0, other); }

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) { return add_scaled(-1.0, other); }

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  simd::scale(s, data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(cplx s, const ComplexMatrix& other) {
  require_same_shape(*this, other, "add");
  simd::axpy(s, other.data_, data_);
  return *this;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw error(errc::shape_mismatch, "matmul inner dimensions");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx s = a(r, k);
      if (s != cplx{}) simd::axpy(s, b.row(k), dst);
    }
  }
  return out;
}

// ---- DensityMatrix -------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims, normalization norm)
    : m_(std::move(m)), dims_(std::move(dims)), norm_(norm) {
  if (!m_.is_square()) throw error(errc::shape_mismatch, "density matrix must be square");
  if (dims_.empty()) throw error(errc::shape_mismatch, "empty subsystem list");
  for (std::size_t d : dims_) {
    if (d < 2) throw error(errc::shape_mismatch, "subsystem dimension below 2");
  }
  if (product(dims_) != m_.rows()) {
    throw error(errc::shape_mismatch, "dims product " + std::to_string(product(dims_)) +
                                          " != matrix size " + std::to_string(m_.rows()));
  }
  if (!is_hermitian(m_, tol::herm)) throw error(errc::non_hermitian, "density matrix");
  if (norm_ == normalization::normalized && std::abs(m_.trace() - 1.0) > tol::trace) {
    throw error(errc::not_normalized, "trace " + std::to_string(m_.trace().real()));
  }
}

DensityMatrix DensityMatrix::renormalized() const {
  const double t = trace();
  if (std::abs(t) <= tol::trace) throw error(errc::zero_trace, "cannot renormalize");
  return DensityMatrix(m_ * cplx(1.0 / t), dims_, normalization::normalized);
}

DensityMatrix DensityMatrix::as_unnormalized() const {
  return DensityMatrix(m_, dims_, normalization::unnormalized);
}

double DensityMatrix::min_eigenvalue() const { return min_eigenvalue_hermitian(m_); }

bool DensityMatrix::is_positive() const {
  return min_eigenvalue() >= -tol::psd * std::max(1.0, std::abs(trace()));
}

// ---- free functions ------------------------------------------------------

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  return simd::max_abs_diff(a.data(), b.data());
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) throw error(errc::shape_mismatch, "trace_product");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj((B^dagger)_ij)
  return simd::dotc(a.data(), b.adjoint().data());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra) {
    for (std::size_t rb = 0; rb < b.rows(); ++rb) {
      auto dst = out.row(ra * b.rows() + rb);
      const auto src = b.row(rb);
      for (std::size_t ca = 0; ca < a.cols(); ++ca) {
        simd::scale(a(ra, ca), src, dst.subspan(ca * b.cols(), b.cols()));
      }
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const auto norm = a.normalized() && b.normalized() ? normalization::normalized
                                                     : normalization::unnormalized;
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims), norm);
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard");
  ComplexMatrix out(a.rows(), a.cols());
  simd::hadamard(a.data(), b.data(), out.data());
  return out;
}

DensityMatrix partial_transpose(const DensityMatrix& rho, std::span<const std::size_t> subsystems) {
  check_subsystems(subsystems, rho.subsystem_count());
  const std::size_t d = rho.dim();
  const auto off = selected_offsets(rho.dims(), subsystems);
  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      out(r - off[r] + off[c], c - off[c] + off[r]) = rho(r, c);
    }
  }
  return DensityMatrix(std::move(out), rho.dims(), normalization::unnormalized);
}

DensityMatrix partial_transpose(const DensityMatrix& rho, std::initializer_list<std::size_t> subsystems) {
  return partial_transpose(rho, std::span<const std::size_t>(subsystems.begin(), subsystems.size()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> discard) {
  const std::size_t n = rho.subsystem_count();
  check_subsystems(discard, n);
  std::vector<bool> drop(n, false);
  for (std::size_t s : discard) drop[s] = true;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (!drop[k]) keep.push_back(k);
  if (keep.empty()) throw error(errc::discard_all, "partial_trace");

  std::vector<std::size_t> dropped;
  for (std::size_t k = 0; k < n; ++k)
    if (drop[k]) dropped.push_back(k);

  const auto& dims = rho.dims();
  const auto st = strides_of(dims);
  // Base offsets enumerating the kept and the discarded digits independently.
  auto enumerate = [&](const std::vector<std::size_t>& subs) {
    std::vector<std::size_t> base{0};
    for (std::size_t s : subs) {
      std::vector<std::size_t> next;
      next.reserve(base.size() * dims[s]);
      for (std::size_t b : base)
        for (std::size_t v = 0; v < dims[s]; ++v) next.push_back(b + v * st[s]);
      base = std::move(next);
    }
    return base;
  };
  const auto kb = enumerate(keep);
  const auto db = enumerate(dropped);

  std::vector<std::size_t> kept_dims;
  for (std::size_t k : keep) kept_dims.push_back(dims[k]);
  ComplexMatrix out(kb.size(), kb.size());
  for (std::size_t r = 0; r < kb.size(); ++r) {
    for (std::size_t c = 0; c < kb.size(); ++c) {
      cplx acc = 0.0;
      for (std::size_t t : db) acc += rho(kb[r] + t, kb[c] + t);
      out(r, c) = acc;
    }
  }
  return DensityMatrix(std::move(out), std::move(kept_dims),
                       rho.normalized() ? normalization::normalized : normalization::unnormalized);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> discard) {
  return partial_trace(rho, std::span<const std::size_t>(discard.begin(), discard.size()));
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size(), perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size() || inv[perm[k]] != perm.size()) {
      throw error(errc::malformed_permutation, "not a permutation of 0.." + std::to_string(perm.size() - 1));
    }
    inv[perm[k]] = k;
  }
  return inv;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  if (perm.size() != rho.subsystem_count()) {
    throw error(errc::malformed_permutation, "length differs from subsystem count");
  }
  inverse_permutation(perm);  // validates

  const auto& dims = rho.dims();
  const auto old_st = strides_of(dims);
  std::vector<std::size_t> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];

  const std::size_t d = rho.dim();
  std::vector<std::size_t> old_of_new(d);
  std::vector<std::size_t> digit(perm.size(), 0);
  for (std::size_t idx = 0; idx < d; ++idx) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) o += digit[k] * old_st[perm[k]];
    old_of_new[idx] = o;
    for (std::size_t k = perm.size(); k-- > 0;) {
      if (++digit[k] < new_dims[k]) break;
      digit[k] = 0;
    }
  }

  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = rho(old_of_new[r], old_of_new[c]);
  return DensityMatrix(std::move(out), std::move(new_dims),
                       rho.normalized() ? normalization::normalized : normalization::unnormalized);
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::initializer_list<std::size_t> perm) {
  return permute_subsystems(rho, std::span<const std::size_t>(perm.begin(), perm.size()));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m, tol::herm)) throw error(errc::non_hermitian, "eigensolver input");
  if (m.rows() == 0) return {};
  const Eigen::Map<const EigenRowMajor> view(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                             static_cast<Eigen::Index>(m.cols()));
  const Eigen::MatrixXcd dense = view;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw error(errc::numerical_contract, "eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double min_eigenvalue_hermitian(const ComplexMatrix& m) {
  const auto ev = hermitian_eigenvalues(m);
  if (ev.empty()) throw error(errc::shape_mismatch, "empty matrix");
  return ev.front();
}

std::size_t flat_index(std::span<const std::size_t> digits, std::span<const std::size_t> dims) {
  if (digits.size() != dims.size()) throw error(errc::shape_mismatch, "digit count");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] >= dims[k]) throw error(errc::index_out_of_range, "digit exceeds dimension");
    idx = idx * dims[k] + digits[k];
  }
  return idx;
}

std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  if (index != 0) throw error(errc::index_out_of_range, "flat index exceeds dimension");
  return out;
}

std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

}  // namespace gmelab
