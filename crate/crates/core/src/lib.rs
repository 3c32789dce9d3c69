//! Decompose any finite-dimensional complex operator into two self-adjoint
//! parts, classify its joint measurability by the commutator of those parts,
//! and simulate the counterfactual EPR-type protocol that assigns the
//! operator a complex measurement value — including a triangular multiport
//! realization of arbitrary Hermitian measurements.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Kronecker/partial-trace algebra,
//!   and the Jacobi Hermitian eigensolver.
//! - [`decompose`]: the Cartesian split `A = A₁ + iA₂` and the normality
//!   classification.
//! - [`state`]: pure/mixed states, entangled sources, Born distributions.
//! - [`protocol`]: the entangled-pair measurement protocol, its mirror
//!   observables, and the direct joint path for normal operators.
//! - [`multiport`]: two-level rotation meshes realizing any unitary.
//! - [`rng`]: the seeded, reproducible random stream used everywhere.

pub mod decompose;
pub mod error;
pub mod linalg;
pub mod multiport;
pub mod protocol;
pub mod rng;
pub mod state;
pub mod testutil;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use decompose::{
    decompose, decompose_with_tolerance, default_normality_tolerance, imag_part, is_normal,
    is_normal_default, real_part, recompose, CartesianDecomposition,
};
pub use linalg::{
    hermitian_eig, pauli_x, pauli_y, pauli_z, ComplexMatrix, HermitianEigensystem, Subsystem,
};
pub use multiport::{
    network_born_check, realize_measurement, reck_decompose, reconstruct, BornComparison,
    MeasurementRealization, MultiportPlan, TwoLevelRotation,
};
pub use protocol::{
    direct_joint_measure, joint_distribution, mirror_observable, run_protocol, verify_certainty,
    CorrelationReport, MirrorObservable, Mode, ProjectiveMeasurement, ProtocolConfig,
    ProtocolReport, ShotRecord, Source,
};
pub use rng::{RandomStream, RNG_ID};
pub use state::{
    born_distribution, expectation, maximally_entangled, sample_outcome, singlet, DensityState,
    OutcomeDistribution, PureState,
};
