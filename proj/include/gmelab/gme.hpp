#pragma once

// GM concurrence of X-form states, the Hadamard-product map and the
// copy-number thresholds for isotropic GHZ states.

#include <optional>
#include <string_view>

#include "gmelab/linalg.hpp"
#include "gmelab/states.hpp"

namespace gmelab {

/// 2 max{0, max_i (|z_i| - sum_{j != i} sqrt(a_j b_j))}
double gm_concurrence_xform(const XFormState& x);
/// Index attaining the inner maximum (0-based).
std::size_t gm_concurrence_argmax(const XFormState& x);
/// max{0, |p| - (1-p)(1 - 2^(1-N))}
double gm_concurrence_isotropic(int n_qubits, double p);

enum class threshold_kind { single_copy, k_copy, partition_separability };

std::string_view to_string(threshold_kind kind) noexcept;

struct ThresholdReport {
  int n_qubits;
  int k;
  double p_threshold;
  threshold_kind kind;
};

/// (2^(N-1) - 1) / (2^N - 1)
ThresholdReport single_copy_threshold(int n_qubits);
/// r / (2^(N-1) + r) with r = (2^(N-1) - 1)^(1/k)
ThresholdReport k_copy_threshold(int n_qubits, int k);
/// 1 / (1 + 2^(N-1)); k is reported as 0.
ThresholdReport partition_separability_threshold(int n_qubits);

/// (rho ∘ sigma) / Tr(rho ∘ sigma). Throws zero_trace if the trace is <= tol::trace.
DensityMatrix hadamard_map(const DensityMatrix& rho, const DensityMatrix& sigma);

/// k-fold Hadamard product of x with itself, computed on (a, b, z) directly.
XFormState iterated_hadamard(const XFormState& x, int k);

struct ActivationReport {
  int n_qubits;
  double p;
  int k_max;
  /// Smallest k <= k_max with p > p^(k); empty if none.
  std::optional<int> copies;
  /// p <= 1/(1 + 2^(N-1)): separable for a fixed bipartition, no activation possible.
  bool partition_separable;
};

ActivationReport activation_classification(int n_qubits, double p, int k_max);

}  // namespace gmelab
