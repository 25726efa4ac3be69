#pragma once

// Two-qutrit PPT entangled family, PPT-triangle and wedge states, the
// three-qutrit witness W3, and the three-copy LOCC reduction from a
// biseparable nine-subsystem source.

#include <array>

#include "gmelab/linalg.hpp"
#include "gmelab/states.hpp"

namespace gmelab {

/// 3 (1 + p + 1/p)
double ppt_normalization(double p);

/// [ |Φ><Φ| (unnormalized, Φ = |00>+|11>+|22>) + p (|01><01| + |12><12| + |20><20|)
///   + (1/p) (|02><02| + |10><10| + |21><21|) ] / (3 (1 + p + 1/p)), dims [3,3].
/// Throws non_positive_parameter for p <= 0.
DensityMatrix qutrit_ppt_state(double p);

/// 12 diagonal projectors and -|aaa><bbb| for a != b in {0,1,2}, dims [3,3,3].
DensityMatrix witness_w3();

// Triangle layout: six qutrits ordered A2 A3 B1 B3 C1 C2. Party 0 holds
// (B1, C1), party 1 holds (A2, C2), party 2 holds (A3, B3).
inline constexpr std::array<int, 6> kTrianglePartyOf{1, 2, 0, 2, 0, 1};

/// rho(z) on A2A3, rho(y) on B1B3, rho(x) on C1C2. With this labeling the
/// projected witness trace is 3/(Nx Ny Nz) (xy + z/x + yz - 1).
ProductFormState triangle_state(double x, double y, double z);

/// rho(x) on A2A3 and rho(y) on B1B3, ordered A2 A3 B1 B3.
ProductFormState wedge_state(double x, double y);

struct SubspaceProjection {
  DensityMatrix unnormalized;  // P rho P^dagger, trace = probability
  double probability;
  DensityMatrix state;         // renormalized
};

/// |ii>_{B1C1} |jj>_{A2C2} |kk>_{A3B3} -> |ijk>. Throws zero_probability.
SubspaceProjection project_triangle_to_D(const ProductFormState& triangle);
/// |i>_{B1} |j>_{A2} |kk>_{A3B3} -> |ijk>. Throws zero_probability.
SubspaceProjection project_wedge_to_D(const ProductFormState& wedge);

/// Closed forms for Tr[W3 P rho P^dagger] (unrenormalized projection).
double witness_trace_triangle(double x, double y, double z);
double witness_trace_wedge(double x, double y);
/// Tr[W3 rho] on any three-qutrit operator.
double witness_expectation(const DensityMatrix& rho);

// Source layout: nine subsystems of dimension 4 (level 0 is the flag, levels
// 1..3 carry a qutrit), grouped in three slots of three. Slot s lists party s
// first and then the other two parties in ascending order.
inline constexpr std::size_t kSourceLocalDim = 4;
inline constexpr std::array<int, 9> kSourcePartyOf{0, 1, 2, 1, 0, 2, 2, 0, 1};

/// sum_i p_i (I/3 on party i's slot-i subsystem) ⊗ (PPT pair on the other two
/// parties' slot-i subsystems) ⊗ |0><0| on every other subsystem. The pair in
/// slot 0 (parties 1,2) uses z, slot 1 (parties 0,2) uses y, slot 2 (parties
/// 0,1) uses x, so three copies reduce to triangle_state(x, y, z).
/// Terms with p_i = 0 are omitted. Throws invalid_probability.
ProductFormState biseparable_source_state(std::array<double, 3> probs, double x, double y, double z);

/// Minimum eigenvalue of the partial transpose of a source state across the
/// cut separating the parties in `far_side`, evaluated on the state's support.
double source_pt_min_eigenvalue(const ProductFormState& source, std::span<const int> far_side);

struct LoccOutcome {
  ProductFormState state;              // six qutrits, triangle layout
  std::array<double, 3> step_probability;
  double success_probability;          // product of the three steps
};

/// Party 0 projects its slot-0 subsystem of copy 0, party 1 its slot-1
/// subsystem of copy 1, party 2 its slot-2 subsystem of copy 2 onto the
/// complement of |0>. Every subsystem outside the surviving pairs is then
/// traced out and the pairs are compressed from 4 to 3 levels.
LoccOutcome simulate_locc_triangle(const std::array<ProductFormState, 3>& copies);

}  // namespace gmelab
