//! Counterfactual measurement of an arbitrary operator over an entangled
//! pair.
//!
//! The source emits two particles; a mirror observable measured on particle
//! 1 predicts, with certainty, the A₁ outcome of particle 2, which is itself
//! measured for A₂. Each shot therefore assigns particle 2 both a λ₁ and a
//! λ₂, combined as the complex value λ₁ + iλ₂. When the parts commute the
//! counterfactual detour is unnecessary and a direct joint measurement in a
//! common eigenbasis is available instead.

use num_complex::Complex64;

use crate::decompose::{decompose, is_normal_default};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli_y, ComplexMatrix, Subsystem};
use crate::rng::{RandomStream, RNG_ID};
use crate::state::{
    expectation, maximally_entangled, sample_index, singlet, DensityState, PureState,
};
use crate::tol;

/// Entangled pair source. The singlet is the two-qubit case from the
/// original argument; the canonical maximally entangled state generalizes it
/// to any local dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Singlet,
    Canonical { dim: usize },
}

impl Source {
    /// Default source for a given single-particle dimension: the singlet
    /// for qubits, the canonical state otherwise.
    pub fn for_dim(dim: usize) -> Result<Source> {
        match dim {
            0 | 1 => Err(Error::SourceDimension { dim }),
            2 => Ok(Source::Singlet),
            d => Ok(Source::Canonical { dim: d }),
        }
    }

    pub fn particle_dim(&self) -> usize {
        match self {
            Source::Singlet => 2,
            Source::Canonical { dim } => *dim,
        }
    }

    pub fn state(&self) -> Result<PureState> {
        match self {
            Source::Singlet => Ok(singlet()),
            Source::Canonical { dim } => maximally_entangled(*dim),
        }
    }

    /// Particle-1 observable whose outcome predicts `h` on particle 2 with
    /// certainty: `hᵀ` for the canonical state, `σ_y hᵀ σ_y` for the
    /// singlet.
    pub fn mirror_matrix(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        if h.dim() != self.particle_dim() {
            return Err(Error::DimensionMismatch {
                left: h.dim(),
                right: self.particle_dim(),
            });
        }
        match self {
            Source::Canonical { .. } => Ok(h.transpose()),
            Source::Singlet => {
                let sy = pauli_y();
                sy.multiply(&h.transpose())?.multiply(&sy)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::Singlet => "singlet".to_string(),
            Source::Canonical { dim } => format!("canonical-{dim}"),
        }
    }
}

/// A Hermitian observable prepared for projective measurement: merged
/// outcome values (ascending) with one orthogonal projector per outcome.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    matrix: ComplexMatrix,
    outcomes: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        h.require_hermitian(tol::HERMITICITY_TOL)?;
        let eig = hermitian_eig(h)?;
        let mut outcomes = Vec::new();
        let mut projectors = Vec::new();
        for (value, columns) in eig.degenerate_groups() {
            outcomes.push(value);
            projectors.push(eig.projector(&columns));
        }
        Ok(ProjectiveMeasurement {
            matrix: h.clone(),
            outcomes,
            projectors,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Merged outcome values, ascending.
    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn projector(&self, outcome: usize) -> &ComplexMatrix {
        &self.projectors[outcome]
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }
}

/// Joint Born distribution of measuring `on_first` on particle 1 and
/// `on_second` on particle 2 of `state`: `P[j][k] = ⟨ψ|(Q_j ⊗ R_k)|ψ⟩`.
/// The two factors commute, so the table is an honest joint distribution.
pub fn joint_distribution(
    state: &PureState,
    on_first: &ProjectiveMeasurement,
    on_second: &ProjectiveMeasurement,
) -> Result<Vec<Vec<f64>>> {
    let d1 = on_first.dim();
    let d2 = on_second.dim();
    if d1 * d2 != state.dim() {
        return Err(Error::DimensionMismatch {
            left: d1 * d2,
            right: state.dim(),
        });
    }
    let amplitudes = state.amplitudes();
    let mut table = vec![vec![0.0; on_second.outcome_count()]; on_first.outcome_count()];
    for (j, row) in table.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let op = on_first.projector(j).tensor(on_second.projector(k));
            let mut value = Complex64::new(0.0, 0.0);
            for r in 0..state.dim() {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..state.dim() {
                    acc += op[(r, c)] * amplitudes[c];
                }
                value += amplitudes[r].conj() * acc;
            }
            *cell = value.re.max(0.0);
        }
    }
    Ok(table)
}

/// The particle-1 observable that predicts a particle-2 observable with
/// certainty, plus the outcome correspondence extracted from the joint
/// distribution itself.
#[derive(Debug, Clone)]
pub struct MirrorObservable {
    /// Original observable, acting on particle 2.
    pub original: ProjectiveMeasurement,
    /// Mirrored observable, acting on particle 1.
    pub mirrored: ProjectiveMeasurement,
    /// `value_map[j]` is the original outcome predicted by mirror outcome
    /// `j` with certainty.
    pub value_map: Vec<usize>,
}

impl MirrorObservable {
    /// Original outcome value inferred from a mirror outcome index.
    pub fn inferred_value(&self, mirror_outcome: usize) -> f64 {
        self.original.outcomes()[self.value_map[mirror_outcome]]
    }
}

/// Build the mirror of Hermitian `h` for the given source and verify the
/// perfect-correlation invariant: the joint probability of non-corresponding
/// outcomes must not exceed [`tol::CERTAINTY_TOL`].
pub fn mirror_observable(h: &ComplexMatrix, source: &Source) -> Result<MirrorObservable> {
    h.require_hermitian(tol::HERMITICITY_TOL)?;
    let original = ProjectiveMeasurement::new(h)?;
    let mirrored = ProjectiveMeasurement::new(&source.mirror_matrix(h)?)?;
    let table = joint_distribution(&source.state()?, &mirrored, &original)?;

    let mut value_map = Vec::with_capacity(mirrored.outcome_count());
    for row in &table {
        let (best, &mass) = row
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.total_cmp(b))
            .expect("at least one outcome");
        if mass <= 0.0 {
            return Err(Error::Inconsistency(
                "mirror outcome carries no probability mass".into(),
            ));
        }
        value_map.push(best);
    }

    // The correspondence must be one-to-one and leave no stray mass.
    let mut seen = vec![false; original.outcome_count()];
    for &k in &value_map {
        if seen[k] {
            return Err(Error::Inconsistency(
                "mirror correspondence is not one-to-one".into(),
            ));
        }
        seen[k] = true;
    }
    let mirror = MirrorObservable {
        original,
        mirrored,
        value_map,
    };
    let off = off_correspondence_mass(&table, &mirror.value_map);
    if off > tol::CERTAINTY_TOL {
        return Err(Error::Inconsistency(format!(
            "off-correspondence probability mass {off:e} exceeds {:e}",
            tol::CERTAINTY_TOL
        )));
    }
    // Identical spectra: corresponding outcomes carry the same eigenvalue.
    for (j, &k) in mirror.value_map.iter().enumerate() {
        let diff = (mirror.mirrored.outcomes()[j] - mirror.original.outcomes()[k]).abs();
        if diff > 1e-6 {
            return Err(Error::Inconsistency(format!(
                "mirror spectrum mismatch: outcome {j} maps across eigenvalue gap {diff:e}"
            )));
        }
    }
    Ok(mirror)
}

fn off_correspondence_mass(table: &[Vec<f64>], value_map: &[usize]) -> f64 {
    table
        .iter()
        .enumerate()
        .map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(k, _)| *k != value_map[j])
                .map(|(_, &p)| p)
                .sum::<f64>()
        })
        .sum()
}

/// How the per-shot values are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Infer A₁ on particle 2 through the mirror on particle 1 (always
    /// available).
    Counterfactual,
    /// Joint measurement in a common eigenbasis (requires a normal
    /// operator).
    Direct,
}

/// Validated protocol configuration.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub operator: ComplexMatrix,
    pub source: Source,
    pub shots: u64,
    pub seed: u64,
    pub mode: Mode,
}

impl ProtocolConfig {
    pub fn new(
        operator: ComplexMatrix,
        source: Source,
        shots: u64,
        seed: u64,
        mode: Mode,
    ) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if operator.dim() != source.particle_dim() {
            return Err(Error::DimensionMismatch {
                left: operator.dim(),
                right: source.particle_dim(),
            });
        }
        if mode == Mode::Direct && !is_normal_default(&operator)? {
            let commutator_norm = crate::decompose::real_part(&operator)
                .commutator(&crate::decompose::imag_part(&operator))?
                .frobenius_norm();
            return Err(Error::NotNormal {
                commutator_norm,
                tol: crate::decompose::default_normality_tolerance(&operator),
            });
        }
        Ok(ProtocolConfig {
            operator,
            source,
            shots,
            seed,
            mode,
        })
    }
}

/// One simulated shot. `combined` is exactly `lambda1 + i·lambda2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub shot: u64,
    pub outcome1: usize,
    pub outcome2: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub combined: Complex64,
}

impl ShotRecord {
    fn new(shot: u64, outcome1: usize, outcome2: usize, lambda1: f64, lambda2: f64) -> Self {
        ShotRecord {
            shot,
            outcome1,
            outcome2,
            lambda1,
            lambda2,
            combined: Complex64::new(lambda1, lambda2),
        }
    }
}

/// Aggregate of a run: the estimator, its per-component standard errors,
/// and the exact expectation it converges to.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// `Tr(ρ₂ A)` in the reduced state ρ₂ of the measured particle.
    pub exact: Complex64,
    pub exact_a1: f64,
    pub exact_a2: f64,
    pub shots: u64,
    pub seed: u64,
    pub rng: &'static str,
}

fn summarize(
    records: &[ShotRecord],
    exact: Complex64,
    exact_a1: f64,
    exact_a2: f64,
    seed: u64,
) -> ProtocolReport {
    let n = records.len() as f64;
    let mean_re = records.iter().map(|r| r.lambda1).sum::<f64>() / n;
    let mean_im = records.iter().map(|r| r.lambda2).sum::<f64>() / n;
    let (stderr_re, stderr_im) = if records.len() > 1 {
        let var_re = records
            .iter()
            .map(|r| (r.lambda1 - mean_re).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        let var_im = records
            .iter()
            .map(|r| (r.lambda2 - mean_im).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        ((var_re / n).sqrt(), (var_im / n).sqrt())
    } else {
        (0.0, 0.0)
    };
    ProtocolReport {
        mean: Complex64::new(mean_re, mean_im),
        stderr_re,
        stderr_im,
        exact,
        exact_a1,
        exact_a2,
        shots: records.len() as u64,
        seed,
        rng: RNG_ID,
    }
}

/// Run the protocol described by `config`.
///
/// Counterfactual mode decomposes the operator, mirrors A₁ onto particle 1,
/// and samples the exact joint Born distribution of (mirror(A₁) on particle
/// 1, A₂ on particle 2); each shot combines the inferred A₁ value with the
/// measured A₂ value. Direct mode requires a normal operator and measures
/// both parts at once in their common eigenbasis on the source-induced
/// reduced state.
pub fn run_protocol(config: &ProtocolConfig) -> Result<(Vec<ShotRecord>, ProtocolReport)> {
    match config.mode {
        Mode::Counterfactual => run_counterfactual(config),
        Mode::Direct => {
            let d = config.source.particle_dim();
            let rho2 = config
                .source
                .state()?
                .density()
                .reduced(d, d, Subsystem::Second)?;
            direct_joint_measure(&config.operator, &rho2, config.shots, config.seed)
        }
    }
}

fn run_counterfactual(config: &ProtocolConfig) -> Result<(Vec<ShotRecord>, ProtocolReport)> {
    let parts = decompose(&config.operator)?;
    let mirror = mirror_observable(&parts.re, &config.source)?;
    let a2_measurement = ProjectiveMeasurement::new(&parts.im)?;
    let source_state = config.source.state()?;
    let table = joint_distribution(&source_state, &mirror.mirrored, &a2_measurement)?;

    // Flatten (j, k) cells row-major for inverse-CDF sampling.
    let k_count = a2_measurement.outcome_count();
    let flat: Vec<f64> = table.iter().flat_map(|row| row.iter().copied()).collect();

    let mut rng = RandomStream::derive(config.seed, 0);
    let mut records = Vec::with_capacity(config.shots as usize);
    for shot in 0..config.shots {
        let cell = sample_index(&flat, &mut rng);
        let (j, k) = (cell / k_count, cell % k_count);
        records.push(ShotRecord::new(
            shot,
            j,
            k,
            mirror.inferred_value(j),
            a2_measurement.outcomes()[k],
        ));
    }

    let d = config.source.particle_dim();
    let rho2 = source_state.density().reduced(d, d, Subsystem::Second)?;
    let exact = expectation(&rho2, &config.operator)?;
    let exact_a1 = expectation(&rho2, &parts.re)?.re;
    let exact_a2 = expectation(&rho2, &parts.im)?.re;
    let report = summarize(&records, exact, exact_a1, exact_a2, config.seed);
    check_exact_identity(&report)?;
    Ok((records, report))
}

fn check_exact_identity(report: &ProtocolReport) -> Result<()> {
    let recombined = Complex64::new(report.exact_a1, report.exact_a2);
    let residual = (report.exact - recombined).norm();
    if residual > tol::ROUND_TRIP_TOL {
        return Err(Error::Inconsistency(format!(
            "exact expectation fails to split over the parts (residual {residual:e})"
        )));
    }
    Ok(())
}

/// Sampled and exact correlation quality of the mirror construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    /// Fraction of shots whose outcomes respected the value map.
    pub agreement_fraction: f64,
    /// Exact joint probability mass off the correspondence.
    pub exact_off_mass: f64,
    pub shots: u64,
    pub seed: u64,
    pub rng: &'static str,
}

/// Measure `mirror(h)` on particle 1 against `h` on particle 2 and report
/// how often (sampled) and how strongly (exactly) the correspondence holds.
pub fn verify_certainty(
    h: &ComplexMatrix,
    source: &Source,
    shots: u64,
    seed: u64,
) -> Result<CorrelationReport> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mirror = mirror_observable(h, source)?;
    let table = joint_distribution(&source.state()?, &mirror.mirrored, &mirror.original)?;
    let exact_off_mass = off_correspondence_mass(&table, &mirror.value_map);

    let k_count = mirror.original.outcome_count();
    let flat: Vec<f64> = table.iter().flat_map(|row| row.iter().copied()).collect();
    let mut rng = RandomStream::derive(seed, 0);
    let mut agreed = 0u64;
    for _ in 0..shots {
        let cell = sample_index(&flat, &mut rng);
        let (j, k) = (cell / k_count, cell % k_count);
        if mirror.value_map[j] == k {
            agreed += 1;
        }
    }
    Ok(CorrelationReport {
        agreement_fraction: agreed as f64 / shots as f64,
        exact_off_mass,
        shots,
        seed,
        rng: RNG_ID,
    })
}

/// Jointly measure the commuting parts of a normal operator in a common
/// eigenbasis of A₁ and A₂. Errors with [`Error::NotNormal`] when the parts
/// do not commute — the regime where only the counterfactual path exists.
pub fn direct_joint_measure(
    a: &ComplexMatrix,
    rho: &DensityState,
    shots: u64,
    seed: u64,
) -> Result<(Vec<ShotRecord>, ProtocolReport)> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: rho.dim(),
        });
    }
    let parts = decompose(a)?;
    if !parts.normal {
        return Err(Error::NotNormal {
            commutator_norm: parts.commutator_norm,
            tol: crate::decompose::default_normality_tolerance(a),
        });
    }

    let basis = common_eigenbasis(&parts.re, &parts.im)?;
    let d = a.dim();

    // Merged outcome lists give the recorded indices and values.
    let a1_measurement = ProjectiveMeasurement::new(&parts.re)?;
    let a2_measurement = ProjectiveMeasurement::new(&parts.im)?;

    // Per-basis-vector data: Born weight and the two eigenvalue readings.
    let mut probabilities = Vec::with_capacity(d);
    let mut values = Vec::with_capacity(d);
    for b in 0..d {
        let column = basis.column(b);
        let mut weight = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                weight += column[i].conj() * rho.matrix()[(i, j)] * column[j];
            }
        }
        let lambda1 = quadratic_form(&parts.re, &column);
        let lambda2 = quadratic_form(&parts.im, &column);
        let outcome1 = nearest_outcome(a1_measurement.outcomes(), lambda1);
        let outcome2 = nearest_outcome(a2_measurement.outcomes(), lambda2);
        probabilities.push(weight.re.max(0.0));
        values.push((outcome1, outcome2));
    }

    let mut rng = RandomStream::derive(seed, 0);
    let mut records = Vec::with_capacity(shots as usize);
    for shot in 0..shots {
        let b = sample_index(&probabilities, &mut rng);
        let (outcome1, outcome2) = values[b];
        records.push(ShotRecord::new(
            shot,
            outcome1,
            outcome2,
            a1_measurement.outcomes()[outcome1],
            a2_measurement.outcomes()[outcome2],
        ));
    }

    let exact = expectation(rho, a)?;
    let exact_a1 = expectation(rho, &parts.re)?.re;
    let exact_a2 = expectation(rho, &parts.im)?.re;
    let report = summarize(&records, exact, exact_a1, exact_a2, seed);
    check_exact_identity(&report)?;
    Ok((records, report))
}

/// `⟨v|m|v⟩` for a unit column.
fn quadratic_form(m: &ComplexMatrix, v: &[Complex64]) -> f64 {
    let d = m.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

fn nearest_outcome(outcomes: &[f64], value: f64) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (k, &o) in outcomes.iter().enumerate() {
        let dist = (o - value).abs();
        if dist < best_dist {
            best = k;
            best_dist = dist;
        }
    }
    best
}

/// Unitary whose columns simultaneously diagonalize two commuting Hermitian
/// matrices: the eigenbasis of `a1`, refined inside each degenerate block by
/// diagonalizing the restriction of `a2`.
fn common_eigenbasis(a1: &ComplexMatrix, a2: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig1 = hermitian_eig(a1)?;
    let d = a1.dim();
    let mut basis = eig1.vectors.clone();
    for (_, columns) in eig1.degenerate_groups() {
        let g = columns.len();
        if g == 1 {
            continue;
        }
        // Restriction of a2 to the degenerate block: W† a2 W.
        let block = ComplexMatrix::from_fn(g, |r, c| {
            let wr = basis.column(columns[r]);
            let wc = basis.column(columns[c]);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += wr[i].conj() * a2[(i, j)] * wc[j];
                }
            }
            acc
        });
        // Hermitize away rounding noise before diagonalizing.
        let block = block
            .add(&block.adjoint())
            .expect("same dim")
            .scale(Complex64::new(0.5, 0.0));
        let sub = hermitian_eig(&block)?;
        // Replace the block columns with W·U.
        let old: Vec<Vec<Complex64>> = columns.iter().map(|&c| basis.column(c)).collect();
        let mut refreshed = vec![vec![Complex64::new(0.0, 0.0); d]; g];
        for (new_idx, refreshed_col) in refreshed.iter_mut().enumerate() {
            for i in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (old_idx, old_col) in old.iter().enumerate() {
                    acc += old_col[i] * sub.vectors[(old_idx, new_idx)];
                }
                refreshed_col[i] = acc;
            }
        }
        let mut entries = basis.entries().to_vec();
        for (new_idx, refreshed_col) in refreshed.iter().enumerate() {
            for i in 0..d {
                entries[i * d + columns[new_idx]] = refreshed_col[i];
            }
        }
        basis = ComplexMatrix::new(d, entries)?;
    }
    basis.require_unitary(tol::UNITARITY_TOL)?;
    Ok(basis)
}
