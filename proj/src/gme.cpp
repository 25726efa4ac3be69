#include "gmelab/gme.hpp"

#include <cmath>
#include <string>

#include "gmelab/error.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

namespace {

void require_qubits(int n) {
  if (n < 2 || n > 60) throw error(errc::parameter_out_of_range, "qubit count " + std::to_string(n));
}

}  // namespace

std::size_t gm_concurrence_argmax(const XFormState& x) {
  x.validate(normalization::unnormalized);
  const std::size_t n = x.half();
  std::vector<double> g(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = std::sqrt(x.a[j] * x.b[j]);
    total += g[j];
  }
  std::size_t best = 0;
  double best_v = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(x.z[i]) - (total - g[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

double gm_concurrence_xform(const XFormState& x) {
  const std::size_t i = gm_concurrence_argmax(x);
  double others = 0.0;
  for (std::size_t j = 0; j < x.half(); ++j)
    if (j != i) others += std::sqrt(x.a[j] * x.b[j]);
  return 2.0 * std::max(0.0, std::abs(x.z[i]) - others);
}

double gm_concurrence_isotropic(int n_qubits, double p) {
  const IsotropicGHZ iso(n_qubits, p);
  return std::max(0.0, std::abs(p) - (1.0 - p) * (1.0 - std::ldexp(1.0, 1 - n_qubits)));
}

std::string_view to_string(threshold_kind kind) noexcept {
  switch (kind) {
    case threshold_kind::single_copy: return "single_copy";
    case threshold_kind::k_copy: return "k_copy";
    case threshold_kind::partition_separability: return "partition_separability";
  }
  return "unknown";
}

ThresholdReport single_copy_threshold(int n_qubits) {
  require_qubits(n_qubits);
  const double h = std::ldexp(1.0, n_qubits - 1);
  return {n_qubits, 1, (h - 1.0) / (2.0 * h - 1.0), threshold_kind::single_copy};
}

ThresholdReport k_copy_threshold(int n_qubits, int k) {
  require_qubits(n_qubits);
  if (k < 1) throw error(errc::parameter_out_of_range, "copy count must be >= 1");
  const double h = std::ldexp(1.0, n_qubits - 1);
  const double r = std::pow(h - 1.0, 1.0 / k);
  return {n_qubits, k, r / (h + r), threshold_kind::k_copy};
}

ThresholdReport partition_separability_threshold(int n_qubits) {
  require_qubits(n_qubits);
  return {n_qubits, 0, 1.0 / (1.0 + std::ldexp(1.0, n_qubits - 1)), threshold_kind::partition_separability};
}

DensityMatrix hadamard_map(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw error(errc::shape_mismatch, "hadamard_map subsystem dims");
  ComplexMatrix m = hadamard(rho.matrix(), sigma.matrix());
  const double t = m.trace().real();
  if (t <= tol::trace) throw error(errc::zero_trace, "Tr(rho ∘ sigma) = " + std::to_string(t));
  m *= 1.0 / t;
  return DensityMatrix(std::move(m), rho.dims());
}

XFormState iterated_hadamard(const XFormState& x, int k) {
  if (k < 1) throw error(errc::parameter_out_of_range, "copy count must be >= 1");
  x.validate(normalization::unnormalized);
  XFormState out = x;
  if (k == 1) return out;
  // Repeated products keep real inputs exactly real (std::pow on complex goes through log).
  for (int m = 1; m < k; ++m) {
    for (std::size_t i = 0; i < x.half(); ++i) {
      out.a[i] *= x.a[i];
      out.b[i] *= x.b[i];
      out.z[i] *= x.z[i];
    }
  }
  const double t = out.trace();
  if (t <= 0.0) throw error(errc::zero_trace, "all componentwise powers vanish");
  for (std::size_t i = 0; i < x.half(); ++i) {
    out.a[i] /= t;
    out.b[i] /= t;
    out.z[i] /= t;
  }
  return out;
}

ActivationReport activation_classification(int n_qubits, double p, int k_max) {
  if (k_max < 1) throw error(errc::parameter_out_of_range, "k_max must be >= 1");
  const IsotropicGHZ iso(n_qubits, p);
  ActivationReport rep{n_qubits, p, k_max, std::nullopt,
                       p <= partition_separability_threshold(n_qubits).p_threshold};
  for (int k = 1; k <= k_max; ++k) {
    if (p > k_copy_threshold(n_qubits, k).p_threshold) {
      rep.copies = k;
      break;
    }
  }
  return rep;
}

}  // namespace gmelab
