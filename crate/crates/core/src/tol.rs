//! Centralized numerical tolerances.
//!
//! All thresholds used across the crate live here so that tests, the
//! library, and the CLI agree on a single set of constants. Matrices are
//! at most 18×18 with order-unity entries, so double precision leaves a
//! comfortable margin everywhere.

/// Maximum allowed entrywise deviation |A - A†| for a matrix to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Maximum allowed entrywise deviation |U†U - I| for a propagator.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Residual bound for the eigendecomposition, max |A·V - V·diag(λ)|.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Deviation from unit trace tolerated when admitting a density matrix.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative eigenvalue tolerated when admitting a density matrix.
/// Evolution plus reduction introduces rounding at the 1e-12 scale; this
/// slack is three orders looser.
pub const POSITIVITY_SLACK: f64 = 1e-9;

/// Threshold below which a reduction-criterion eigenvalue counts as a violation.
pub const REDUCTION_TOL: f64 = 1e-10;

/// Negativity threshold for the classification labels.
pub const N_TOL: f64 = 1e-9;

/// Realignment threshold for the classification labels.
pub const R_TOL: f64 = 1e-9;

/// Normalization slack for pure-state amplitudes.
pub const NORMALIZATION_TOL: f64 = 1e-12;
