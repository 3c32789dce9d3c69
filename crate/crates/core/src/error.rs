//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension must be at least 1")]
    ZeroDimension,

    #[error("entry count {got} does not match a {dim}x{dim} matrix (expected {expected})")]
    EntryCount {
        dim: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("hermiticity violated: asymmetry norm {asymmetry:e} exceeds {tol:e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("unitarity violated: deviation norm {deviation:e} exceeds {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("operator is not normal: commutator norm {commutator_norm:e} exceeds {tol:e}")]
    NotNormal { commutator_norm: f64, tol: f64 },

    /// A density-matrix invariant failed; `invariant` names which one.
    #[error("density matrix invariant violated: {invariant}")]
    InvalidDensity { invariant: String },

    #[error("state norm {norm} is not 1 within {tol:e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("shots must be positive")]
    ZeroShots,

    #[error("entangled source needs local dimension >= 2, got {dim}")]
    SourceDimension { dim: usize },

    #[error("tolerance must be positive, got {tol}")]
    NonPositiveTolerance { tol: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigNotConverged { sweeps: usize, off_norm: f64 },

    #[error("subsystem dims {dim_a}x{dim_b} do not factor matrix dim {dim}")]
    BadFactorization {
        dim: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("invalid two-level rotation: {reason}")]
    InvalidRotation { reason: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}
