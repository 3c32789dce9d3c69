//! Named tolerances. Every numeric threshold used by the library lives here;
//! no module carries its own ad-hoc magic numbers.

/// Frobenius tolerance applied everywhere a Hermitian input is required.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Frobenius tolerance for the Hermiticity of computed real/imaginary parts.
pub const PART_HERMITICITY_TOL: f64 = 1e-12;

/// Frobenius tolerance on the decompose/recompose round trip.
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Frobenius tolerance applied everywhere a unitary input is required.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Pure-state normalization tolerance on the squared amplitude sum.
pub const NORM_ONE_TOL: f64 = 1e-12;

/// Density-matrix trace tolerance.
pub const TRACE_ONE_TOL: f64 = 1e-12;

/// Density-matrix eigenvalues must be >= -POSITIVITY_TOL.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Eigenvalues closer than this merge into a single measurement outcome.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Outcome probabilities must sum to 1 within this bound.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Exact off-correspondence probability mass allowed by the certainty check.
pub const CERTAINTY_TOL: f64 = 1e-12;

/// Jacobi sweep stops once the off-diagonal Frobenius mass drops below
/// `JACOBI_REL_TOL * ||H||_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;

/// Hard cap on Jacobi sweeps before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Entries with modulus below this are treated as already nulled by the
/// multiport sweep; no rotation factor is emitted for them.
pub const NULLING_TOL: f64 = 1e-14;

/// Base of the default normality tolerance, scaled by the squared operator
/// norm (the commutator of the parts grows quadratically with the operator).
pub const NORMALITY_BASE_TOL: f64 = 1e-10;

/// Default normality tolerance for an operator with the given Frobenius norm.
pub fn normality_tolerance(frobenius_norm: f64) -> f64 {
    NORMALITY_BASE_TOL * (frobenius_norm * frobenius_norm).max(1.0)
}
