#include "gmelab/boundent.hpp"

#include <cmath>
#include <string>

#include "gmelab/error.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw error(errc::non_positive_parameter, std::string(name) + " = " + std::to_string(v));
  }
}

// Compresses an isometric image of a three-qutrit subspace: output |ijk> is
// read from the global basis state digits(i, j, k).
template <class Digits>
SubspaceProjection project_onto(const ProductFormState& s, Digits digits) {
  std::vector<std::vector<std::size_t>> basis;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) basis.push_back(digits(i, j, k));
  ComplexMatrix m(27, 27);
  for (std::size_t r = 0; r < 27; ++r)
    for (std::size_t c = 0; c < 27; ++c) m(r, c) = s.entry(basis[r], basis[c]);
  const double prob = m.trace().real();
  if (prob <= tol::trace * std::max(1.0, s.total_weight())) {
    throw error(errc::zero_probability, "projection onto the three-qutrit subspace");
  }
  DensityMatrix un(m, {3, 3, 3}, normalization::unnormalized);
  m *= 1.0 / prob;
  return {std::move(un), prob, DensityMatrix(std::move(m), {3, 3, 3})};
}

DensityMatrix flag_state() {
  ComplexMatrix m(kSourceLocalDim, kSourceLocalDim);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), {kSourceLocalDim});
}

}  // namespace

double ppt_normalization(double p) { return 3.0 * (1.0 + p + 1.0 / p); }

DensityMatrix qutrit_ppt_state(double p) {
  require_positive(p, "p");
  ComplexMatrix m(9, 9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(4 * i, 4 * j) = 1.0;
  // |01>, |12>, |20> weighted p; |02>, |10>, |21> weighted 1/p.
  for (std::size_t a = 0; a < 3; ++a) {
    m(3 * a + (a + 1) % 3, 3 * a + (a + 1) % 3) = p;
    m(3 * a + (a + 2) % 3, 3 * a + (a + 2) % 3) = 1.0 / p;
  }
  m *= 1.0 / ppt_normalization(p);
  return DensityMatrix(std::move(m), {3, 3});
}

DensityMatrix witness_w3() {
  ComplexMatrix w(27, 27);
  auto idx = [](int a, int b, int c) { return static_cast<std::size_t>(9 * a + 3 * b + c); };
  const int diag[12][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 1},
                           {1, 1, 2}, {1, 2, 2}, {2, 0, 0}, {2, 1, 2}, {2, 2, 0}, {2, 2, 2}};
  for (const auto& d : diag) w(idx(d[0], d[1], d[2]), idx(d[0], d[1], d[2])) = 1.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) w(idx(a, a, a), idx(b, b, b)) = -1.0;
  return DensityMatrix(std::move(w), {3, 3, 3}, normalization::unnormalized);
}

ProductFormState triangle_state(double x, double y, double z) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(z, "z");
  return ProductFormState({3, 3, 3, 3, 3, 3},
                          {ProductTerm{1.0, {qutrit_ppt_state(z), qutrit_ppt_state(y), qutrit_ppt_state(x)}}});
}

ProductFormState wedge_state(double x, double y) {
  require_positive(x, "x");
  require_positive(y, "y");
  return ProductFormState({3, 3, 3, 3}, {ProductTerm{1.0, {qutrit_ppt_state(x), qutrit_ppt_state(y)}}});
}

SubspaceProjection project_triangle_to_D(const ProductFormState& triangle) {
  if (triangle.global_dims() != std::vector<std::size_t>(6, 3)) {
    throw error(errc::shape_mismatch, "triangle state must be six qutrits");
  }
  // Positions: A2 A3 B1 B3 C1 C2.
  return project_onto(triangle, [](std::size_t i, std::size_t j, std::size_t k) {
    return std::vector<std::size_t>{j, k, i, k, i, j};
  });
}

SubspaceProjection project_wedge_to_D(const ProductFormState& wedge) {
  if (wedge.global_dims() != std::vector<std::size_t>(4, 3)) {
    throw error(errc::shape_mismatch, "wedge state must be four qutrits");
  }
  // Positions: A2 A3 B1 B3.
  return project_onto(wedge, [](std::size_t i, std::size_t j, std::size_t k) {
    return std::vector<std::size_t>{j, k, i, k};
  });
}

double witness_trace_triangle(double x, double y, double z) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(z, "z");
  return 3.0 / (ppt_normalization(x) * ppt_normalization(y) * ppt_normalization(z)) *
         (x * y + z / x + y * z - 1.0);
}

double witness_trace_wedge(double x, double y) {
  require_positive(x, "x");
  require_positive(y, "y");
  return 3.0 / (ppt_normalization(x) * ppt_normalization(y)) * (x + y + x * y - 1.0);
}

double witness_expectation(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{3, 3, 3}) throw error(errc::shape_mismatch, "witness needs dims [3,3,3]");
  static const DensityMatrix w = witness_w3();
  return trace_product(w.matrix(), rho.matrix()).real();
}

ProductFormState biseparable_source_state(std::array<double, 3> probs, double x, double y, double z) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw error(errc::invalid_probability, "negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw error(errc::invalid_probability, "entries sum to " + std::to_string(total));
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(z, "z");

  const std::array<double, 3> pair_param{z, y, x};
  const DensityMatrix flag = flag_state();
  std::vector<double> mixed{0.0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  const DensityMatrix lone(ComplexMatrix::diagonal(mixed), {kSourceLocalDim});

  std::vector<ProductTerm> terms;
  for (int i = 0; i < 3; ++i) {
    if (probs[i] == 0.0) continue;
    ProductTerm t{probs[i], {}};
    for (int slot = 0; slot < 3; ++slot) {
      if (slot == i) {
        t.factors.push_back(lone);
        t.factors.push_back(embed_levels(qutrit_ppt_state(pair_param[i]), kSourceLocalDim, 1));
      } else {
        for (int q = 0; q < 3; ++q) t.factors.push_back(flag);
      }
    }
    terms.push_back(std::move(t));
  }
  return ProductFormState(std::vector<std::size_t>(9, kSourceLocalDim), std::move(terms));
}

double source_pt_min_eigenvalue(const ProductFormState& source, std::span<const int> far_side) {
  if (source.global_dims() != std::vector<std::size_t>(9, kSourceLocalDim)) {
    throw error(errc::shape_mismatch, "source state must have nine subsystems of dimension 4");
  }
  std::vector<std::size_t> subs;
  for (std::size_t k = 0; k < kSourcePartyOf.size(); ++k)
    for (int p : far_side)
      if (kSourcePartyOf[k] == p) subs.push_back(k);
  return product_form_pt_min_eigenvalue(source, subs);
}

LoccOutcome simulate_locc_triangle(const std::array<ProductFormState, 3>& copies) {
  for (const auto& c : copies) {
    if (c.global_dims() != std::vector<std::size_t>(9, kSourceLocalDim)) {
      throw error(errc::shape_mismatch, "each copy must have nine subsystems of dimension 4");
    }
  }
  ProductFormState joint = product_form_tensor(product_form_tensor(copies[0], copies[1]), copies[2]);

  ComplexMatrix not_flag = ComplexMatrix::identity(kSourceLocalDim);
  not_flag(0, 0) = 0.0;

  LoccOutcome out{joint, {}, 1.0};
  // Copy c, slot c, first position: party c's own subsystem.
  for (std::size_t c = 0; c < 3; ++c) {
    Projected pr = product_form_project(out.state, 9 * c + 3 * c, not_flag);
    out.step_probability[c] = pr.probability;
    out.success_probability *= pr.probability;
    out.state = std::move(pr.state);
  }
  // The pairs: copy c, slot c, positions 1 and 2.
  const std::array<std::size_t, 6> keep{1, 2, 9 + 3 + 1, 9 + 3 + 2, 18 + 6 + 1, 18 + 6 + 2};
  out.state = product_form_partial_trace(out.state, keep);

  ComplexMatrix compress(3, kSourceLocalDim);
  for (std::size_t l = 0; l < 3; ++l) compress(l, l + 1) = 1.0;
  for (std::size_t k = 0; k < keep.size(); ++k) out.state = product_form_apply_local(out.state, k, compress);
  std::vector<ProductTerm> terms = out.state.terms();
  out.state = ProductFormState(out.state.global_dims(), std::move(terms));
  return out;
}

}  // namespace gmelab
