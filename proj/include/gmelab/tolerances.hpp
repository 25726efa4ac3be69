#pragma once

namespace gmelab::tol {

// Absolute bound on |m(i,j) - conj(m(j,i))|.
inline constexpr double herm = 1e-12;
// Absolute bound on |Tr(rho) - 1| for operators flagged normalized.
inline constexpr double trace = 1e-12;
// PSD floor, multiplied by the trace of the operator under test.
inline constexpr double psd = 1e-10;
// Eigenvalue accuracy, relative to the spectral norm.
inline constexpr double eig = 1e-10;
// Largest magnitude tolerated off the diagonal and anti-diagonal of an X-form matrix.
inline constexpr double xform = 1e-12;
// Entrywise residual bound for the two-copy biseparable decomposition.
inline constexpr double decomp = 1e-10;

}  // namespace gmelab::tol
