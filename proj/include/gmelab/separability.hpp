#pragma once

// Partition separability of isotropic GHZ states via partial transposition,
// and the explicit biseparable decomposition of two copies of the
// three-qubit isotropic GHZ state.
//
// Six-qubit layout for the two-copy state: A1 B1 A2 B2 A3 B3, where party k
// (0-based) holds qubits 2k (first copy) and 2k+1 (second copy). Basis
// labels m run over 1..64 with m - 1 the bit string A1 B1 A2 B2 A3 B3.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gmelab/linalg.hpp"
#include "gmelab/states.hpp"

namespace gmelab {

/// Four 1-based six-qubit basis labels receiving |00>, |01>, |10>, |11>.
struct EmbeddingSpec {
  std::array<int, 4> m;
};

/// The bipartition of the three parties across which an embedding is a local
/// isometry: the first qubit of the two-qubit input lands on `first_side`,
/// the second on the complement. Throws rectangle_violation.
struct EmbeddingCut {
  Partition partition;            // {alone}, {other two}
  std::vector<int> first_side;    // parties carrying the first input qubit
};
EmbeddingCut embedding_cut(const EmbeddingSpec& spec);

/// 1/4 (|++><++| + |--><--| + |rl><rl| + |lr><lr|)
DensityMatrix gamma_base();
DensityMatrix embed_gamma(const EmbeddingSpec& spec);

/// Tuple lists as printed, including the one Gamma_1 entry that repeats an index.
const std::vector<EmbeddingSpec>& gamma1_tuples_printed();
const std::vector<EmbeddingSpec>& gamma2_tuples();

/// Gamma_1 tuples after the single-index repair described by gamma1_correction().
const std::vector<EmbeddingSpec>& gamma1_tuples();
/// Human-readable repair, e.g. "gamma(11,12,31,31) -> gamma(11,12,31,32)";
/// empty when the printed list needed none.
const std::optional<std::string>& gamma1_correction();

DensityMatrix gamma_big_1();
DensityMatrix gamma_big_2();

/// The 16-term separable four-qubit state.
DensityMatrix sigma_small();
/// U_k sigma U_k^dagger for party k in {0,1,2}. U_k sends sigma's first two
/// qubits to A_k B_k, its third qubit onto the A qubits of both other parties
/// and its fourth onto their B qubits.
DensityMatrix sigma_term(int k);
/// 1/3 sum_k U_k sigma U_k^dagger
DensityMatrix sigma_big();

/// Diagonal 64x64 with the four closed-form entry classes divided by
/// 64 (1-2p)^2. At p = 1/2 returns the limit of (1-2p)^2 rho_diag, i.e. the
/// numerators over 64, flagged unnormalized.
DensityMatrix rho_diag_closed_form(double p);
/// Entry-class polynomial for 1-based label m, without the 64 (1-2p)^2 divisor.
double rho_diag_numerator(int m, double p);

/// rho_3(p) ⊗ rho_3(p) reordered to A1 B1 A2 B2 A3 B3.
DensityMatrix two_copy_target(double p);

enum class component_kind { diagonal, gamma1, gamma2, sigma };

struct BisepComponent {
  double weight;
  component_kind kind;
  std::optional<Partition> partition;  // empty for the diagonal component
  DensityMatrix state;
};

struct DecompositionWeights {
  double diagonal;  // (1-2p)^2
  double gamma1;    // p(3-7p)
  double gamma2;    // p(1-p)
  double sigma;     // 4p^2
};

struct BisepDecomposition {
  double p;
  std::vector<BisepComponent> components;
  DensityMatrix target;
  DecompositionWeights weights;
  double residual_max;  // max |sum w state - target|
  double diag_min;      // smallest entry of (1-2p)^2 rho_diag
  bool valid;
  std::optional<std::string> gamma1_correction;
};

BisepDecomposition two_copy_decomposition(double p);

struct AuditEntry {
  component_kind kind;
  Partition partition;
  double pt_min_eigenvalue;
};
/// Partial transpose of every non-diagonal component across its own cut.
std::vector<AuditEntry> separability_audit(const BisepDecomposition& d);

struct Interval {
  double lo;
  double hi;
};
/// Exact set of p on which every weight and every diagonal class is
/// nonnegative. Throws numerical_contract if that set is not one interval.
Interval bisep_validity_interval();

/// 1 / (1 + 2^(N-1))
double ppt_crit(int n_qubits);
/// (1-p)/2^N - p/2, the only eigenvalue of the partial transpose that can go negative.
double pt_flagged_eigenvalue(int n_qubits, double p);
/// Numerical minimum eigenvalue of the partial transpose of rho(p) across `cut`.
double pt_min_eig_isotropic(int n_qubits, double p, const Partition& cut);
std::vector<double> pt_spectrum_isotropic(int n_qubits, double p, const Partition& cut);

}  // namespace gmelab
