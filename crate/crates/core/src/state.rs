//! Pure and mixed states, entangled sources, Born-rule outcome
//! distributions, and complex expectation values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianEigensystem, Subsystem};
use crate::rng::RandomStream;
use crate::tol;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Build from amplitudes; the squared moduli must sum to 1 within
    /// [`tol::NORM_ONE_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (i, a) in amplitudes.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol::NORM_ONE_TOL {
            return Err(Error::NotNormalized {
                norm: norm_sq.sqrt(),
                tol: tol::NORM_ONE_TOL,
            });
        }
        Ok(PureState { amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        PureState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Density matrix `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityState {
        let d = self.dim();
        let matrix =
            ComplexMatrix::from_fn(d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityState { matrix }
    }
}

/// Two-qubit singlet `(|01⟩ − |10⟩)/√2`, anticorrelated along every spin
/// direction.
pub fn singlet() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState {
        amplitudes: vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    }
}

/// Canonical maximally entangled state `(1/√d) Σᵢ |ii⟩` of two
/// d-dimensional particles.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::SourceDimension { dim: d });
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        amplitudes[i * d + i] = Complex64::new(amp, 0.0);
    }
    Ok(PureState { amplitudes })
}

/// Density matrix with validated Hermiticity, unit trace, and positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: ComplexMatrix,
}

impl DensityState {
    /// Validate and wrap a density matrix. The error names the violated
    /// invariant.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let asymmetry = matrix.hermiticity_defect();
        if asymmetry > tol::HERMITICITY_TOL {
            return Err(Error::InvalidDensity {
                invariant: format!("hermiticity (asymmetry norm {asymmetry:e})"),
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::TRACE_ONE_TOL || trace.im.abs() > tol::TRACE_ONE_TOL {
            return Err(Error::InvalidDensity {
                invariant: format!("unit trace (trace {} + {}i)", trace.re, trace.im),
            });
        }
        let eig = hermitian_eig(&matrix)?;
        if let Some(&lowest) = eig
            .eigenvalues
            .first()
            .filter(|&&lambda| lambda < -tol::POSITIVITY_TOL)
        {
            return Err(Error::InvalidDensity {
                invariant: format!("positivity (lowest eigenvalue {lowest:e})"),
            });
        }
        Ok(DensityState { matrix })
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityState { matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.density()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state of one subsystem of a bipartite density matrix.
    pub fn reduced(&self, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<DensityState> {
        DensityState::new(self.matrix.partial_trace(dim_a, dim_b, keep)?)
    }
}

/// Complex expectation value `Tr(ρ·a)`. For Hermitian `a` the imaginary
/// component stays below the trace tolerance.
pub fn expectation(rho: &DensityState, a: &ComplexMatrix) -> Result<Complex64> {
    Ok(rho.matrix().multiply(a)?.trace())
}

/// Outcome values and probabilities of a projective measurement, ascending
/// in eigenvalue with degenerate levels merged.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    eigenvalues: Vec<f64>,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validate lengths, non-negativity, and unit total probability.
    pub fn new(eigenvalues: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != probabilities.len() {
            return Err(Error::InvalidDistribution {
                reason: format!(
                    "{} eigenvalues vs {} probabilities",
                    eigenvalues.len(),
                    probabilities.len()
                ),
            });
        }
        if eigenvalues.is_empty() {
            return Err(Error::InvalidDistribution {
                reason: "no outcomes".into(),
            });
        }
        for &p in &probabilities {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution {
                    reason: format!("negative or non-finite probability {p}"),
                });
            }
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tol::PROBABILITY_SUM_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {total}"),
            });
        }
        Ok(OutcomeDistribution {
            eigenvalues,
            probabilities,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `Σ λ·p`.
    pub fn mean(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .map(|(l, p)| l * p)
            .sum()
    }
}

/// Born-rule outcome distribution of measuring `obs` in state `state`.
/// Degenerate eigenvalues merge into a single outcome whose probability sums
/// the projector weights.
pub fn born_distribution(
    state: &DensityState,
    obs: &HermitianEigensystem,
) -> Result<OutcomeDistribution> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: obs.dim(),
        });
    }
    let rho = state.matrix();
    let d = state.dim();
    let mut eigenvalues = Vec::new();
    let mut probabilities = Vec::new();
    for (value, columns) in obs.degenerate_groups() {
        let mut p = 0.0;
        for &k in &columns {
            // ⟨v_k|ρ|v_k⟩
            let v = obs.eigenvector(k);
            let mut weight = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    weight += v[i].conj() * rho[(i, j)] * v[j];
                }
            }
            p += weight.re;
        }
        eigenvalues.push(value);
        probabilities.push(p.max(0.0));
    }
    OutcomeDistribution::new(eigenvalues, probabilities)
}

/// Draw an outcome index by inverse CDF over the ascending-eigenvalue
/// outcome list. Deterministic for a fixed stream.
pub fn sample_outcome(dist: &OutcomeDistribution, rng: &mut RandomStream) -> usize {
    sample_index(dist.probabilities(), rng)
}

/// Inverse-CDF draw over an arbitrary probability slice (summing to ~1).
pub(crate) fn sample_index(probabilities: &[f64], rng: &mut RandomStream) -> usize {
    let u = rng.next_f64();
    let mut cumulative = 0.0;
    for (idx, &p) in probabilities.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return idx;
        }
    }
    probabilities.len() - 1
}
