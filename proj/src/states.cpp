#include "gmelab/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmelab/error.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

namespace {

void require_qubits(int n) {
  if (n < 2 || n > 30) throw error(errc::parameter_out_of_range, "qubit count " + std::to_string(n));
}

// Factors whose trace falls below this are treated as annihilated.
constexpr double kDropTrace = 1e-14;

struct FactorSlot {
  std::size_t factor;
  std::size_t local;
};

// Global subsystem -> (factor, position inside factor) for one term.
std::vector<FactorSlot> slots_of(const ProductTerm& t) {
  std::vector<FactorSlot> out;
  for (std::size_t f = 0; f < t.factors.size(); ++f)
    for (std::size_t l = 0; l < t.factors[f].subsystem_count(); ++l) out.push_back({f, l});
  return out;
}

ComplexMatrix local_operator(const std::vector<std::size_t>& dims, std::size_t pos, const ComplexMatrix& op) {
  ComplexMatrix k = ComplexMatrix::identity(1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    k = kron(k, i == pos ? op : ComplexMatrix::identity(dims[i]));
  }
  return k;
}

}  // namespace

// ---- X-form --------------------------------------------------------------

double XFormState::trace() const {
  double t = 0.0;
  for (double v : a) t += v;
  for (double v : b) t += v;
  return t;
}

void XFormState::validate(normalization norm) const {
  if (n_qubits < 1 || n_qubits > 30) throw error(errc::not_xform, "qubit count");
  const std::size_t n = half();
  if (a.size() != n || b.size() != n || z.size() != n) {
    throw error(errc::not_xform, "parameter lists must have length 2^(N-1)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < -tol::xform || b[i] < -tol::xform) throw error(errc::not_xform, "negative diagonal");
    if (std::norm(z[i]) > a[i] * b[i] + tol::xform) throw error(errc::not_xform, "2x2 block not PSD");
  }
  if (norm == normalization::normalized && std::abs(trace() - 1.0) > tol::trace) {
    throw error(errc::not_normalized, "X-form trace " + std::to_string(trace()));
  }
}

IsotropicGHZ::IsotropicGHZ(int n, double p_) : n_qubits(n), p(p_) {
  require_qubits(n);
  if (!(p >= p_min(n) - 1e-15 && p <= 1.0 + 1e-15)) {
    throw error(errc::parameter_out_of_range, "p = " + std::to_string(p) + " outside [" +
                                                  std::to_string(p_min(n)) + ", 1]");
  }
}

double IsotropicGHZ::p_min(int n) { return -1.0 / (std::ldexp(1.0, n) - 1.0); }

std::vector<cplx> ghz_vector(int n_qubits) {
  require_qubits(n_qubits);
  std::vector<cplx> v(std::size_t{1} << n_qubits);
  v.front() = v.back() = 1.0 / std::sqrt(2.0);
  return v;
}

XFormState isotropic_ghz(int n_qubits, double p) {
  const IsotropicGHZ iso(n_qubits, p);
  XFormState x;
  x.n_qubits = n_qubits;
  const std::size_t n = x.half();
  const double mixed = (1.0 - p) / std::ldexp(1.0, n_qubits);
  x.a.assign(n, mixed);
  x.b.assign(n, mixed);
  x.z.assign(n, 0.0);
  x.a[0] += p / 2;
  x.b[0] += p / 2;
  x.z[0] = p / 2;
  return x;
}

DensityMatrix isotropic_ghz_dense(int n_qubits, double p) { return xform_to_dense(isotropic_ghz(n_qubits, p)); }

DensityMatrix xform_to_dense(const XFormState& x) {
  x.validate(normalization::unnormalized);
  const std::size_t n = x.half();
  const std::size_t d = 2 * n;
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = x.a[i];
    m(d - 1 - i, d - 1 - i) = x.b[i];
    m(i, d - 1 - i) = x.z[i];
    m(d - 1 - i, i) = std::conj(x.z[i]);
  }
  const bool unit = std::abs(x.trace() - 1.0) <= tol::trace;
  return DensityMatrix(std::move(m), std::vector<std::size_t>(x.n_qubits, 2),
                       unit ? normalization::normalized : normalization::unnormalized);
}

XFormState xform_from_dense(const DensityMatrix& rho) {
  for (std::size_t d : rho.dims()) {
    if (d != 2) throw error(errc::not_xform, "X-form needs qubit subsystems");
  }
  const std::size_t d = rho.dim();
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if (c == r || c == d - 1 - r) continue;
      if (std::abs(rho(r, c)) >= tol::xform) {
        throw error(errc::not_xform, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                         ") = " + std::to_string(std::abs(rho(r, c))));
      }
    }
  }
  XFormState x;
  x.n_qubits = static_cast<int>(rho.subsystem_count());
  const std::size_t n = x.half();
  for (std::size_t i = 0; i < n; ++i) {
    x.a.push_back(rho(i, i).real());
    x.b.push_back(rho(d - 1 - i, d - 1 - i).real());
    x.z.push_back(rho(i, d - 1 - i));
  }
  return x;
}

// ---- partitions ----------------------------------------------------------

void Partition::validate(int n_parties) const {
  std::vector<int> seen(n_parties, 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw error(errc::invalid_argument, "empty partition block");
    for (int p : block) {
      if (p < 0 || p >= n_parties) throw error(errc::index_out_of_range, "party " + std::to_string(p));
      if (seen[p]++) throw error(errc::invalid_argument, "party listed twice");
    }
  }
  for (int s : seen)
    if (!s) throw error(errc::invalid_argument, "partition does not cover every party");
}

std::vector<std::size_t> Partition::far_side() const {
  if (blocks.size() != 2) throw error(errc::invalid_argument, "not a bipartition");
  const bool first_has_zero = std::find(blocks[0].begin(), blocks[0].end(), 0) != blocks[0].end();
  const auto& side = first_has_zero ? blocks[1] : blocks[0];
  std::vector<std::size_t> out(side.begin(), side.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> bipartitions(int n_parties) {
  if (n_parties < 2) throw error(errc::parameter_out_of_range, "need at least two parties");
  std::vector<Partition> out;
  const unsigned full = 1u << (n_parties - 1);
  // Bit j of mask puts party j+1 on the far side.
  for (unsigned mask = 1; mask < full; ++mask) {
    Partition p;
    p.blocks.resize(2);
    p.blocks[0].push_back(0);
    for (int j = 1; j < n_parties; ++j) p.blocks[(mask >> (j - 1)) & 1u ? 1 : 0].push_back(j);
    out.push_back(std::move(p));
  }
  return out;
}

// ---- product-form states -------------------------------------------------

ProductFormState::ProductFormState(std::vector<std::size_t> global_dims, std::vector<ProductTerm> terms,
                                   normalization norm)
    : dims_(std::move(global_dims)), terms_(std::move(terms)), norm_(norm) {
  for (const auto& t : terms_) {
    if (t.weight < 0.0) throw error(errc::invalid_argument, "negative term weight");
    std::vector<std::size_t> cat;
    for (const auto& f : t.factors) {
      if (!f.normalized()) throw error(errc::not_normalized, "product-form factors must be normalized");
      cat.insert(cat.end(), f.dims().begin(), f.dims().end());
    }
    if (cat != dims_) throw error(errc::shape_mismatch, "term factor dims differ from global dims");
  }
  if (norm_ == normalization::normalized && std::abs(total_weight() - 1.0) > tol::trace) {
    throw error(errc::not_normalized, "weights sum to " + std::to_string(total_weight()));
  }
}

double ProductFormState::total_weight() const {
  double w = 0.0;
  for (const auto& t : terms_) w += t.weight;
  return w;
}

DensityMatrix ProductFormState::dense() const {
  const std::size_t d = dimension();
  if (d > kMaxDenseDimension) {
    throw error(errc::unsupported, "dense expansion of dimension " + std::to_string(d));
  }
  ComplexMatrix acc(d, d);
  for (const auto& t : terms_) {
    ComplexMatrix k = ComplexMatrix::identity(1);
    for (const auto& f : t.factors) k = kron(k, f.matrix());
    acc.add_scaled(t.weight, k);
  }
  return DensityMatrix(std::move(acc), dims_, norm_);
}

cplx ProductFormState::entry(std::span<const std::size_t> row, std::span<const std::size_t> col) const {
  if (row.size() != dims_.size() || col.size() != dims_.size()) {
    throw error(errc::shape_mismatch, "digit count differs from subsystem count");
  }
  cplx sum = 0.0;
  for (const auto& t : terms_) {
    cplx prod = t.weight;
    std::size_t pos = 0;
    for (const auto& f : t.factors) {
      std::size_t r = 0, c = 0;
      for (std::size_t d : f.dims()) {
        r = r * d + row[pos];
        c = c * d + col[pos];
        ++pos;
      }
      prod *= f(r, c);
      if (prod == cplx{}) break;
    }
    sum += prod;
  }
  return sum;
}

ProductFormState product_form_tensor(const ProductFormState& a, const ProductFormState& b) {
  std::vector<std::size_t> dims = a.global_dims();
  dims.insert(dims.end(), b.global_dims().begin(), b.global_dims().end());
  std::vector<ProductTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      ProductTerm t{ta.weight * tb.weight, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      terms.push_back(std::move(t));
    }
  }
  const auto norm = a.normalized() && b.normalized() ? normalization::normalized : normalization::unnormalized;
  return ProductFormState(std::move(dims), std::move(terms), norm);
}

ProductFormState product_form_apply_local(const ProductFormState& s, std::size_t subsystem,
                                          const ComplexMatrix& op) {
  if (subsystem >= s.global_dims().size()) throw error(errc::index_out_of_range, "subsystem");
  if (op.cols() != s.global_dims()[subsystem]) throw error(errc::shape_mismatch, "local operator width");
  if (op.rows() < 2) throw error(errc::shape_mismatch, "local operator must keep dimension >= 2");

  std::vector<std::size_t> dims = s.global_dims();
  dims[subsystem] = op.rows();
  std::vector<ProductTerm> out;
  for (const auto& t : s.terms()) {
    const auto slot = slots_of(t)[subsystem];
    const DensityMatrix& f = t.factors[slot.factor];
    const ComplexMatrix k = local_operator(f.dims(), slot.local, op);
    ComplexMatrix m = matmul(matmul(k, f.matrix()), k.adjoint());
    const double tr = m.trace().real();
    if (tr <= kDropTrace) continue;
    m *= 1.0 / tr;
    std::vector<std::size_t> fd = f.dims();
    fd[slot.local] = op.rows();
    ProductTerm nt{t.weight * tr, t.factors};
    nt.factors[slot.factor] = DensityMatrix(std::move(m), std::move(fd));
    out.push_back(std::move(nt));
  }
  return ProductFormState(std::move(dims), std::move(out), normalization::unnormalized);
}

Projected product_form_project(const ProductFormState& s, std::size_t subsystem, const ComplexMatrix& projector) {
  if (!is_hermitian(projector, tol::herm) || max_abs_diff(matmul(projector, projector), projector) > tol::herm) {
    throw error(errc::invalid_argument, "projector must be Hermitian and idempotent");
  }
  ProductFormState applied = product_form_apply_local(s, subsystem, projector);
  const double before = s.total_weight();
  const double kept = applied.total_weight();
  if (applied.terms().empty() || kept <= kDropTrace * std::max(1.0, before)) {
    throw error(errc::zero_probability, "projection on subsystem " + std::to_string(subsystem));
  }
  std::vector<ProductTerm> terms = applied.terms();
  for (auto& t : terms) t.weight /= kept;
  return {ProductFormState(applied.global_dims(), std::move(terms)), kept / before};
}

ProductFormState product_form_partial_trace(const ProductFormState& s, std::span<const std::size_t> keep) {
  const std::size_t n = s.global_dims().size();
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw error(errc::index_out_of_range, "subsystem " + std::to_string(k));
    kept[k] = true;
  }
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < n; ++k)
    if (kept[k]) dims.push_back(s.global_dims()[k]);
  if (dims.empty()) throw error(errc::discard_all, "product_form_partial_trace");

  std::vector<ProductTerm> out;
  for (const auto& t : s.terms()) {
    ProductTerm nt{t.weight, {}};
    std::size_t pos = 0;
    for (const auto& f : t.factors) {
      std::vector<std::size_t> discard;
      for (std::size_t l = 0; l < f.subsystem_count(); ++l)
        if (!kept[pos + l]) discard.push_back(l);
      pos += f.subsystem_count();
      if (discard.empty()) {
        nt.factors.push_back(f);
      } else if (discard.size() < f.subsystem_count()) {
        nt.factors.push_back(partial_trace(f, discard));
      }
    }
    out.push_back(std::move(nt));
  }
  return ProductFormState(std::move(dims), std::move(out),
                          s.normalized() ? normalization::normalized : normalization::unnormalized);
}

std::vector<std::size_t> product_form_support(const ProductFormState& s) {
  const auto& dims = s.global_dims();
  std::vector<std::size_t> all;
  for (const auto& t : s.terms()) {
    // Per-subsystem levels with nonzero reduced diagonal.
    std::vector<std::vector<std::size_t>> levels;
    for (const auto& f : t.factors) {
      const auto& fd = f.dims();
      std::vector<std::vector<double>> marg(fd.size());
      for (std::size_t l = 0; l < fd.size(); ++l) marg[l].assign(fd[l], 0.0);
      for (std::size_t i = 0; i < f.dim(); ++i) {
        const auto dg = digits_of(i, fd);
        for (std::size_t l = 0; l < fd.size(); ++l) marg[l][dg[l]] += std::abs(f(i, i));
      }
      for (const auto& m : marg) {
        std::vector<std::size_t> lv;
        for (std::size_t v = 0; v < m.size(); ++v)
          if (m[v] > kDropTrace) lv.push_back(v);
        levels.push_back(std::move(lv));
      }
    }
    std::vector<std::size_t> idx{0};
    for (std::size_t k = 0; k < dims.size(); ++k) {
      std::vector<std::size_t> next;
      for (std::size_t base : idx)
        for (std::size_t v : levels[k]) next.push_back(base * dims[k] + v);
      idx = std::move(next);
    }
    all.insert(all.end(), idx.begin(), idx.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

ComplexMatrix product_form_restricted(const ProductFormState& s, std::span<const std::size_t> basis) {
  const auto& dims = s.global_dims();
  std::vector<std::vector<std::size_t>> dg;
  for (std::size_t b : basis) dg.push_back(digits_of(b, dims));
  ComplexMatrix m(basis.size(), basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) m(r, c) = s.entry(dg[r], dg[c]);
  return m;
}

double product_form_pt_min_eigenvalue(const ProductFormState& s, std::span<const std::size_t> subsystems) {
  const auto& dims = s.global_dims();
  for (std::size_t k : subsystems)
    if (k >= dims.size()) throw error(errc::index_out_of_range, "subsystem " + std::to_string(k));
  const auto basis = product_form_support(s);
  std::vector<std::vector<std::size_t>> dg;
  for (std::size_t b : basis) dg.push_back(digits_of(b, dims));
  ComplexMatrix m(basis.size(), basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      auto row = dg[r];
      auto col = dg[c];
      for (std::size_t k : subsystems) std::swap(row[k], col[k]);
      m(r, c) = s.entry(row, col);
    }
  }
  return min_eigenvalue_hermitian(m);
}

DensityMatrix embed_levels(const DensityMatrix& rho, std::size_t new_dim, std::size_t offset) {
  const auto& dims = rho.dims();
  std::vector<std::size_t> nd(dims.size(), new_dim);
  for (std::size_t d : dims)
    if (offset + d > new_dim) throw error(errc::shape_mismatch, "embedding does not fit");
  const std::size_t big = product(nd);
  std::vector<std::size_t> map(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    auto dg = digits_of(i, dims);
    for (auto& v : dg) v += offset;
    map[i] = flat_index(dg, nd);
  }
  ComplexMatrix m(big, big);
  for (std::size_t r = 0; r < rho.dim(); ++r)
    for (std::size_t c = 0; c < rho.dim(); ++c) m(map[r], map[c]) = rho(r, c);
  return DensityMatrix(std::move(m), std::move(nd),
                       rho.normalized() ? normalization::normalized : normalization::unnormalized);
}

}  // namespace gmelab
