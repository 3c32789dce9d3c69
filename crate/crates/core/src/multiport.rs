//! Triangular multiport decomposition: factor any unitary into at most
//! d(d−1)/2 two-level rotations plus a diagonal of output phases, so that an
//! arbitrary Hermitian observable becomes a rotation network followed by
//! computational-basis detection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::state::{born_distribution, DensityState};
use crate::tol;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A unitary acting on two modes `m < n`, identity elsewhere. The 2×2
/// block in rows/columns `(m, n)` is
///
/// ```text
/// | e^{iφ}·cosθ   −sinθ |
/// | e^{iφ}·sinθ    cosθ |
/// ```
///
/// with `θ ∈ [0, π/2]` and `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelRotation {
    pub m: usize,
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
}

impl TwoLevelRotation {
    pub fn new(m: usize, n: usize, theta: f64, phi: f64) -> Result<Self> {
        if m >= n {
            return Err(Error::InvalidRotation {
                reason: format!("mode order violated: m={m} >= n={n}"),
            });
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) || !theta.is_finite() {
            return Err(Error::InvalidRotation {
                reason: format!("theta {theta} outside [0, π/2]"),
            });
        }
        if !(0.0..TWO_PI).contains(&phi) || !phi.is_finite() {
            return Err(Error::InvalidRotation {
                reason: format!("phi {phi} outside [0, 2π)"),
            });
        }
        Ok(TwoLevelRotation { m, n, theta, phi })
    }

    /// Embed into a `dim × dim` identity.
    pub fn embed(&self, dim: usize) -> Result<ComplexMatrix> {
        if self.n >= dim {
            return Err(Error::InvalidRotation {
                reason: format!("mode {} outside dimension {dim}", self.n),
            });
        }
        let c = self.theta.cos();
        let s = self.theta.sin();
        let phase = Complex64::from_polar(1.0, self.phi);
        let mut u = ComplexMatrix::identity(dim);
        let entries = u.entries_mut();
        entries[self.m * dim + self.m] = phase * c;
        entries[self.m * dim + self.n] = Complex64::new(-s, 0.0);
        entries[self.n * dim + self.m] = phase * s;
        entries[self.n * dim + self.n] = Complex64::new(c, 0.0);
        Ok(u)
    }
}

/// Ordered factorization of a unitary: rotations applied to the input in
/// list order, then the diagonal of output phases.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportPlan {
    pub dim: usize,
    pub factors: Vec<TwoLevelRotation>,
    pub output_phases: Vec<Complex64>,
}

impl MultiportPlan {
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }
}

/// Decompose a unitary into a triangular mesh of two-level rotations.
///
/// The sweep walks the strict upper triangle row by row, nulling each entry
/// against the diagonal with one rotation; what survives is the diagonal of
/// output phases. Entries already below [`tol::NULLING_TOL`] emit no factor,
/// so the plan length never exceeds d(d−1)/2.
pub fn reck_decompose(u: &ComplexMatrix) -> Result<MultiportPlan> {
    u.require_unitary(tol::UNITARITY_TOL)?;
    let d = u.dim();
    let mut w = u.clone();
    let mut factors = Vec::new();

    for i in 0..d {
        for j in (i + 1)..d {
            let target = w[(i, j)];
            if target.norm() < tol::NULLING_TOL {
                continue;
            }
            let pivot = w[(i, i)];
            let theta = target.norm().atan2(pivot.norm());
            let phi = wrap_phase(pivot.arg() - target.arg() - std::f64::consts::PI);
            let rotation = TwoLevelRotation::new(i, j, theta, phi)?;
            apply_adjoint_from_right(&mut w, &rotation);
            factors.push(rotation);
        }
    }

    // The residue must be diagonal; collect unit-modulus phases.
    let mut off_mass = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                off_mass += w[(r, c)].norm_sqr();
            }
        }
    }
    if off_mass.sqrt() > 1e-10 {
        return Err(Error::Inconsistency(format!(
            "nulling sweep left off-diagonal mass {:e}",
            off_mass.sqrt()
        )));
    }
    let mut output_phases = Vec::with_capacity(d);
    for r in 0..d {
        let z = w[(r, r)];
        let modulus = z.norm();
        if (modulus - 1.0).abs() > 1e-8 {
            return Err(Error::Inconsistency(format!(
                "output phase {r} has modulus {modulus}"
            )));
        }
        output_phases.push(z / modulus);
    }
    Ok(MultiportPlan {
        dim: d,
        factors,
        output_phases,
    })
}

fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi % TWO_PI;
    if p < 0.0 {
        p += TWO_PI;
    }
    // Collapse the boundary so the canonical range stays half-open.
    if p >= TWO_PI {
        p = 0.0;
    }
    p
}

/// In-place `w ← w · T†` touching only columns `m` and `n` of `w`.
fn apply_adjoint_from_right(w: &mut ComplexMatrix, t: &TwoLevelRotation) {
    let d = w.dim();
    let c = t.theta.cos();
    let s = t.theta.sin();
    let conj_phase = Complex64::from_polar(1.0, -t.phi);
    let entries = w.entries_mut();
    for r in 0..d {
        let wm = entries[r * d + t.m];
        let wn = entries[r * d + t.n];
        entries[r * d + t.m] = conj_phase * c * wm - s * wn;
        entries[r * d + t.n] = conj_phase * s * wm + c * wn;
    }
}

/// Rebuild the unitary a plan represents: rotations in listed order, output
/// phases last.
pub fn reconstruct(plan: &MultiportPlan) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::identity(plan.dim);
    for factor in &plan.factors {
        m = factor.embed(plan.dim)?.multiply(&m)?;
    }
    if plan.output_phases.len() != plan.dim {
        return Err(Error::EntryCount {
            dim: plan.dim,
            expected: plan.dim,
            got: plan.output_phases.len(),
        });
    }
    let diag = ComplexMatrix::from_diagonal(&plan.output_phases)?;
    diag.multiply(&m)
}

/// A Hermitian observable realized as a rotation network: the plan carries
/// the eigenvector unitary, so running the network inverse maps eigenstates
/// onto computational-basis modes.
#[derive(Debug, Clone)]
pub struct MeasurementRealization {
    pub observable: ComplexMatrix,
    /// Ascending eigenvalue per output mode.
    pub eigenvalues: Vec<f64>,
    pub plan: MultiportPlan,
}

/// Eigendecompose `h` and factor its eigenvector unitary into a plan.
pub fn realize_measurement(h: &ComplexMatrix) -> Result<MeasurementRealization> {
    h.require_hermitian(tol::HERMITICITY_TOL)?;
    let eig = hermitian_eig(h)?;
    let plan = reck_decompose(&eig.vectors)?;
    Ok(MeasurementRealization {
        observable: h.clone(),
        eigenvalues: eig.eigenvalues,
        plan,
    })
}

/// Outcome probabilities computed two independent ways: through the
/// reconstructed network and through the Born rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BornComparison {
    /// Merged outcome values, ascending.
    pub outcomes: Vec<f64>,
    pub network_probabilities: Vec<f64>,
    pub born_probabilities: Vec<f64>,
    pub max_abs_diff: f64,
}

/// Push the state through the inverse reconstructed network and read the
/// computational-basis diagonal; compare with the Born distribution of the
/// observable. Degenerate modes merge on both sides.
pub fn network_born_check(
    state: &DensityState,
    realization: &MeasurementRealization,
) -> Result<BornComparison> {
    if state.dim() != realization.observable.dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: realization.observable.dim(),
        });
    }
    let network = reconstruct(&realization.plan)?;
    // ρ in the network's output basis: U† ρ U.
    let rotated = network
        .adjoint()
        .multiply(state.matrix())?
        .multiply(&network)?;
    let d = state.dim();
    let mode_probs: Vec<f64> = (0..d).map(|k| rotated[(k, k)].re.max(0.0)).collect();

    let eig = hermitian_eig(&realization.observable)?;
    let born = born_distribution(state, &eig)?;

    // Merge network modes over the same degenerate groups.
    let groups = eig.degenerate_groups();
    if groups.len() != born.eigenvalues().len() {
        return Err(Error::Inconsistency(
            "outcome grouping disagrees between network and Born paths".into(),
        ));
    }
    let mut outcomes = Vec::with_capacity(groups.len());
    let mut network_probabilities = Vec::with_capacity(groups.len());
    for (value, columns) in &groups {
        outcomes.push(*value);
        network_probabilities.push(columns.iter().map(|&k| mode_probs[k]).sum::<f64>());
    }
    let max_abs_diff = network_probabilities
        .iter()
        .zip(born.probabilities())
        .map(|(&a, &b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(BornComparison {
        outcomes,
        network_probabilities,
        born_probabilities: born.probabilities().to_vec(),
        max_abs_diff,
    })
}
