//! Command implementations behind the `opdec` binary.
//!
//! Each command builds a human summary for stdout plus a machine report
//! (and, for simulations, an optional per-shot record stream). Reports embed
//! a manifest — command, input digests, seed, shots, tolerances, rng
//! identifier, artifact version — and identical manifests produce
//! byte-identical outputs.

pub mod format;

use opdec_core::{
    decompose_with_tolerance, default_normality_tolerance, direct_joint_measure, expectation,
    hermitian_eig, reck_decompose, recompose, reconstruct, run_protocol, Complex64, ComplexMatrix,
    DensityState, Error as CoreError, Mode, ProtocolConfig, ProtocolReport, ShotRecord, Source,
};

use format::{fmt_complex_short, fmt_f64, fmt_f64_short, load_matrix, Report};

/// Process exit codes: 2 usage/parse, 3 invariant violation, 4 violated
/// domain precondition (non-normal operator where a direct measurement was
/// requested).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotNormal { .. } => CliError::Precondition(e.to_string()),
            CoreError::ZeroShots
            | CoreError::SourceDimension { .. }
            | CoreError::NonPositiveTolerance { .. } => CliError::Usage(e.to_string()),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

/// What a command produces; the caller decides where each part goes.
pub struct CommandOutput {
    pub summary: String,
    pub report: String,
    pub records: Option<String>,
}

pub fn cmd_decompose(
    operator_path: &std::path::Path,
    tol: Option<f64>,
) -> Result<CommandOutput, CliError> {
    let input = load_matrix("operator", operator_path)?;
    let a = &input.matrix;
    let tolerance = tol.unwrap_or_else(|| default_normality_tolerance(a));
    let parts = decompose_with_tolerance(a, tolerance)?;
    let residual = recompose(&parts)
        .frobenius_distance(a)
        .map_err(CliError::from)?;

    let mut report = Report::new("decompose");
    report.push_input(&input);
    report.push("dim", a.dim());
    report.push_f64("tol.normality", tolerance);
    report.push_f64("commutator_norm", parts.commutator_norm);
    report.push("normal", parts.normal);
    report.push_f64("round_trip_residual", residual);
    report.push_matrix("a1", &parts.re);
    report.push_matrix("a2", &parts.im);

    let mut summary = format!("decompose: {0}x{0} operator\n", a.dim());
    summary.push_str("a1 (Hermitian real part):\n");
    summary.push_str(&matrix_summary(&parts.re));
    summary.push_str("a2 (Hermitian imaginary part):\n");
    summary.push_str(&matrix_summary(&parts.im));
    summary.push_str(&format!(
        "commutator norm: {}\nnormal: {} (tolerance {})\nround-trip residual: {}\n",
        fmt_f64_short(parts.commutator_norm),
        parts.normal,
        fmt_f64_short(tolerance),
        fmt_f64_short(residual),
    ));

    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records: None,
    })
}

pub fn cmd_expval(
    operator_path: &std::path::Path,
    state_path: &std::path::Path,
) -> Result<CommandOutput, CliError> {
    let operator = load_matrix("operator", operator_path)?;
    let state = load_matrix("state", state_path)?;
    let rho = DensityState::new(state.matrix.clone())?;
    let a = &operator.matrix;

    let value = expectation(&rho, a)?;
    let parts = opdec_core::decompose(a)?;
    let e1 = expectation(&rho, &parts.re)?;
    let e2 = expectation(&rho, &parts.im)?;
    let additivity_residual = (value - (e1 + e2 * Complex64::new(0.0, 1.0))).norm();

    let mut report = Report::new("expval");
    report.push_input(&operator);
    report.push_input(&state);
    report.push("dim", a.dim());
    report.push_f64("expectation_re", value.re);
    report.push_f64("expectation_im", value.im);
    report.push_f64("expectation_a1", e1.re);
    report.push_f64("expectation_a2", e2.re);
    report.push_f64("additivity_residual", additivity_residual);

    let summary = format!(
        "expval: Tr(rho A) = {}\n  Tr(rho A1) = {}\n  Tr(rho A2) = {}\n  additivity residual: {}\n",
        fmt_complex_short(value),
        fmt_f64_short(e1.re),
        fmt_f64_short(e2.re),
        fmt_f64_short(additivity_residual),
    );

    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records: None,
    })
}

pub fn cmd_epr_sim(
    operator_path: &std::path::Path,
    shots: u64,
    seed: u64,
    with_records: bool,
) -> Result<CommandOutput, CliError> {
    let input = load_matrix("operator", operator_path)?;
    let a = input.matrix.clone();
    let source = Source::for_dim(a.dim())?;
    let config = ProtocolConfig::new(a, source.clone(), shots, seed, Mode::Counterfactual)?;
    let (records, protocol_report) = run_protocol(&config)?;

    let mut report = Report::new("epr-sim");
    report.push_input(&input);
    report.push("source", source.label());
    report.push("shots", shots);
    report.push("seed", seed);
    push_protocol_results(&mut report, &protocol_report);

    let summary = protocol_summary("epr-sim", &source.label(), &protocol_report);
    let records = with_records.then(|| record_stream(&records));
    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records,
    })
}

pub fn cmd_direct_sim(
    operator_path: &std::path::Path,
    state_path: &std::path::Path,
    shots: u64,
    seed: u64,
    tol: Option<f64>,
) -> Result<CommandOutput, CliError> {
    let operator = load_matrix("operator", operator_path)?;
    let state = load_matrix("state", state_path)?;
    let a = &operator.matrix;
    let rho = DensityState::new(state.matrix.clone())?;

    // Normality gate at the requested tolerance; failing it signals the
    // counterfactual-only regime.
    let tolerance = tol.unwrap_or_else(|| default_normality_tolerance(a));
    let parts = decompose_with_tolerance(a, tolerance)?;
    if !parts.normal {
        return Err(CoreError::NotNormal {
            commutator_norm: parts.commutator_norm,
            tol: tolerance,
        }
        .into());
    }
    let (_records, protocol_report) = direct_joint_measure(a, &rho, shots, seed)?;

    let mut report = Report::new("direct-sim");
    report.push_input(&operator);
    report.push_input(&state);
    report.push("shots", shots);
    report.push("seed", seed);
    report.push_f64("tol.normality", tolerance);
    report.push_f64("commutator_norm", parts.commutator_norm);
    push_protocol_results(&mut report, &protocol_report);

    let mut summary = protocol_summary("direct-sim", "given state", &protocol_report);
    summary.push_str(&format!(
        "commutator norm: {} (tolerance {})\n",
        fmt_f64_short(parts.commutator_norm),
        fmt_f64_short(tolerance),
    ));
    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records: None,
    })
}

pub fn cmd_reck(unitary_path: &std::path::Path) -> Result<CommandOutput, CliError> {
    let input = load_matrix("unitary", unitary_path)?;
    let u = &input.matrix;
    let plan = reck_decompose(u)?;
    let rebuilt = reconstruct(&plan)?;
    let residual = rebuilt.frobenius_distance(u).map_err(CliError::from)?;

    let mut report = Report::new("reck");
    report.push_input(&input);
    report.push("dim", plan.dim);
    report.push("factor_count", plan.factor_count());
    for f in &plan.factors {
        report.push(
            "factor",
            format!("{} {} {} {}", f.m, f.n, fmt_f64(f.theta), fmt_f64(f.phi)),
        );
    }
    for phase in &plan.output_phases {
        report.push(
            "phase",
            format!("{} {}", fmt_f64(phase.re), fmt_f64(phase.im)),
        );
    }
    report.push_f64("reconstruction_residual", residual);

    let summary = format!(
        "reck: {0}x{0} unitary -> {1} two-level factors, reconstruction residual {2}\n",
        plan.dim,
        plan.factor_count(),
        fmt_f64_short(residual),
    );
    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records: None,
    })
}

pub fn cmd_eig(hermitian_path: &std::path::Path) -> Result<CommandOutput, CliError> {
    let input = load_matrix("hermitian", hermitian_path)?;
    let h = &input.matrix;
    let system = hermitian_eig(h)?;
    let residual = system
        .reconstruct()
        .frobenius_distance(h)
        .map_err(CliError::from)?;

    let mut report = Report::new("eig");
    report.push_input(&input);
    report.push("dim", h.dim());
    report.push_f64_list("eigenvalues", &system.eigenvalues);
    report.push_matrix("vectors", &system.vectors);
    report.push_f64("reconstruction_residual", residual);

    let eigen_list: Vec<String> = system
        .eigenvalues
        .iter()
        .map(|&l| fmt_f64_short(l))
        .collect();
    let summary = format!(
        "eig: {0}x{0} Hermitian\neigenvalues: {1}\nreconstruction residual: {2}\n",
        h.dim(),
        eigen_list.join(" "),
        fmt_f64_short(residual),
    );
    Ok(CommandOutput {
        summary,
        report: report.finish(),
        records: None,
    })
}

fn push_protocol_results(report: &mut Report, r: &ProtocolReport) {
    report.push_f64("mean_re", r.mean.re);
    report.push_f64("mean_im", r.mean.im);
    report.push_f64("stderr_re", r.stderr_re);
    report.push_f64("stderr_im", r.stderr_im);
    report.push_f64("exact_re", r.exact.re);
    report.push_f64("exact_im", r.exact.im);
    report.push_f64("exact_a1", r.exact_a1);
    report.push_f64("exact_a2", r.exact_a2);
}

fn protocol_summary(name: &str, source: &str, r: &ProtocolReport) -> String {
    format!(
        "{name}: {shots} shots (seed {seed}, rng {rng}, source {source})\n\
         mean:  {mean}  (stderr {se_re}, {se_im})\n\
         exact: {exact}\n",
        shots = r.shots,
        seed = r.seed,
        rng = r.rng,
        mean = fmt_complex_short(r.mean),
        se_re = fmt_f64_short(r.stderr_re),
        se_im = fmt_f64_short(r.stderr_im),
        exact = fmt_complex_short(r.exact),
    )
}

/// Newline-delimited per-shot stream:
/// `shot outcome1 outcome2 lambda1 lambda2 combined_re combined_im`.
fn record_stream(records: &[ShotRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 64);
    out.push_str("# shot outcome1 outcome2 lambda1 lambda2 combined_re combined_im\n");
    for r in records {
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            r.shot,
            r.outcome1,
            r.outcome2,
            fmt_f64(r.lambda1),
            fmt_f64(r.lambda2),
            fmt_f64(r.combined.re),
            fmt_f64(r.combined.im),
        ));
    }
    out
}

fn matrix_summary(m: &ComplexMatrix) -> String {
    let d = m.dim();
    let mut out = String::new();
    for i in 0..d {
        out.push_str("  ");
        let row: Vec<String> = (0..d)
            .map(|j| {
                let e = m[(i, j)];
                format!("{:+.6}{:+.6}i", e.re, e.im)
            })
            .collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}
