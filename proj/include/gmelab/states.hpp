#pragma once

// State families: GHZ, isotropic GHZ, X-form, and product-form convex sums.

#include <cstddef>
#include <span>
#include <vector>

#include "gmelab/linalg.hpp"

namespace gmelab {

/// N-qubit X-form state: nonzero entries only on the diagonal and anti-diagonal.
/// With n = 2^(N-1) and 0-based i:
///   a[i] = rho(i, i), b[i] = rho(2^N-1-i, 2^N-1-i), z[i] = rho(i, 2^N-1-i).
struct XFormState {
  int n_qubits = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<cplx> z;

  std::size_t half() const noexcept { return std::size_t{1} << (n_qubits - 1); }
  double trace() const;
  /// Throws not_xform on a shape or positivity failure, not_normalized when
  /// `norm` is normalized and the trace is off.
  void validate(normalization norm = normalization::normalized) const;
};

/// p |GHZ><GHZ| + (1-p) I / 2^N, p in [-1/(2^N-1), 1].
struct IsotropicGHZ {
  int n_qubits;
  double p;

  IsotropicGHZ(int n, double p);
  static double p_min(int n);
};

std::vector<cplx> ghz_vector(int n_qubits);
XFormState isotropic_ghz(int n_qubits, double p);
DensityMatrix isotropic_ghz_dense(int n_qubits, double p);

DensityMatrix xform_to_dense(const XFormState& x);
/// Throws not_xform if an entry off the two diagonals exceeds tol::xform.
XFormState xform_from_dense(const DensityMatrix& rho);

/// Disjoint blocks of 0-based party indices covering 0..N-1.
struct Partition {
  std::vector<std::vector<int>> blocks;

  void validate(int n_parties) const;
  /// Parties in the block that does not contain party 0 (bipartitions only).
  std::vector<std::size_t> far_side() const;
};

/// All 2^(N-1)-1 bipartitions, party 0 always in the first block.
std::vector<Partition> bipartitions(int n_parties);

// ---- product-form states -------------------------------------------------

struct ProductTerm {
  double weight;
  /// Factors in subsystem order; their dims concatenate to the global dims.
  std::vector<DensityMatrix> factors;
};

/// Sum_t w_t (factor_t1 ⊗ factor_t2 ⊗ ...). Every factor is a normalized
/// state; the weights carry all of the trace.
class ProductFormState {
 public:
  ProductFormState(std::vector<std::size_t> global_dims, std::vector<ProductTerm> terms,
                   normalization norm = normalization::normalized);

  const std::vector<std::size_t>& global_dims() const noexcept { return dims_; }
  const std::vector<ProductTerm>& terms() const noexcept { return terms_; }
  bool normalized() const noexcept { return norm_ == normalization::normalized; }
  double total_weight() const;
  std::size_t dimension() const { return product(dims_); }

  /// Dense expansion; refused above 4096 dimensions.
  DensityMatrix dense() const;
  /// Matrix element between two basis states given as per-subsystem digits.
  cplx entry(std::span<const std::size_t> row, std::span<const std::size_t> col) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<ProductTerm> terms_;
  normalization norm_;
};

inline constexpr std::size_t kMaxDenseDimension = 4096;

ProductFormState product_form_tensor(const ProductFormState& a, const ProductFormState& b);

struct Projected {
  ProductFormState state;  // renormalized
  double probability;      // total weight surviving, before renormalization
};

/// Applies `projector` to one subsystem of every term; terms with vanishing
/// trace are dropped. Throws zero_probability when nothing survives.
Projected product_form_project(const ProductFormState& s, std::size_t subsystem,
                               const ComplexMatrix& projector);

/// Conjugates one subsystem of every term by `op` (rows = new dimension),
/// then renormalizes the factor and folds its trace into the weight. No
/// global renormalization.
ProductFormState product_form_apply_local(const ProductFormState& s, std::size_t subsystem,
                                          const ComplexMatrix& op);

/// Traces out every subsystem not listed in `keep`; kept order is ascending.
ProductFormState product_form_partial_trace(const ProductFormState& s,
                                            std::span<const std::size_t> keep);

/// Basis states lying in the support of some term, each as a flat index.
/// Every term must have product support; the set is the union over terms of
/// the per-subsystem diagonal supports.
std::vector<std::size_t> product_form_support(const ProductFormState& s);

/// Dense matrix restricted to `basis` (flat indices).
ComplexMatrix product_form_restricted(const ProductFormState& s, std::span<const std::size_t> basis);

/// Minimum eigenvalue of the partial transpose over `subsystems`, evaluated on
/// product_form_support(s). Exact when every term has product support, since
/// each term's partial transpose then stays inside that term's support.
double product_form_pt_min_eigenvalue(const ProductFormState& s, std::span<const std::size_t> subsystems);

/// Places a state on levels [offset, offset + d) of each subsystem enlarged to `new_dim`.
DensityMatrix embed_levels(const DensityMatrix& rho, std::size_t new_dim, std::size_t offset);

}  // namespace gmelab
