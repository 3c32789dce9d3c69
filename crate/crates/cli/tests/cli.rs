//! End-to-end tests of the `opdec` binary: formats, exit codes, golden
//! values, and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use opdec_cli::format::{parse_matrix, write_matrix};
use opdec_core::{testutil, Complex64, ComplexMatrix, RandomStream};

static DIR_COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "opdec-cli-test-{}-{}",
        std::process::id(),
        DIR_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn opdec(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opdec"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write input file");
    path.to_string_lossy().into_owned()
}

fn ladder_operator_file(dir: &Path) -> String {
    write_file(dir, "ladder.mat", "dim 2\n0 0 0 0\n1 0 0 0\n")
}

fn mixed_state_file(dir: &Path) -> String {
    write_file(dir, "mixed.mat", "dim 2\n0.5 0 0 0\n0 0 0.5 0\n")
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("report key {key} missing"))
        .to_string()
}

fn report_f64(report: &str, key: &str) -> f64 {
    report_value(report, key).parse().expect("numeric value")
}

#[test]
fn decompose_ladder_operator_report() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let out = opdec(&["decompose", &a, "--out", "report.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert_eq!(report_value(&report, "normal"), "false");
    assert!(report_f64(&report, "round_trip_residual") <= 1e-12);
    assert!((report_f64(&report, "commutator_norm") - 0.5_f64.sqrt()).abs() < 1e-15);
    // a1 = σ₁/2 and a2 = −σ₂/2 serialized exactly.
    assert!(report.contains(
        "matrix a1\ndim 2\n0.0000000000000000e0 0.0000000000000000e0 \
         5.0000000000000000e-1 0.0000000000000000e0\n5.0000000000000000e-1 \
         0.0000000000000000e0 0.0000000000000000e0 0.0000000000000000e0"
    ));
    assert!(report.contains(
        "matrix a2\ndim 2\n0.0000000000000000e0 0.0000000000000000e0 \
         0.0000000000000000e0 5.0000000000000000e-1\n0.0000000000000000e0 \
         -5.0000000000000000e-1 0.0000000000000000e0 0.0000000000000000e0"
    ));
}

#[test]
fn decompose_hermitian_reports_zero_imaginary_part() {
    let dir = scratch_dir();
    let z = write_file(&dir, "z.mat", "dim 2\n1 0 0 0\n0 0 -1 0\n");
    let out = opdec(&["decompose", &z, "--out", "report.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert_eq!(report_value(&report, "normal"), "true");
    assert!(report.contains(
        "matrix a2\ndim 2\n0.0000000000000000e0 0.0000000000000000e0 \
         0.0000000000000000e0 0.0000000000000000e0\n0.0000000000000000e0 \
         0.0000000000000000e0 0.0000000000000000e0 0.0000000000000000e0"
    ));
}

#[test]
fn decompose_scalar_input() {
    let dir = scratch_dir();
    let s = write_file(&dir, "s.mat", "dim 1\n3.25 -1.5\n");
    let out = opdec(&["decompose", &s, "--out", "report.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert!(report.contains("matrix a1\ndim 1\n3.2500000000000000e0 0.0000000000000000e0"));
    // The imaginary slot carries IEEE negative zero from the −(i/2) product.
    assert!(report.contains("matrix a2\ndim 1\n-1.5000000000000000e0 -0.0000000000000000e0"));
    assert_eq!(report_value(&report, "normal"), "true");
}

#[test]
fn decompose_parse_failure_exits_2() {
    let dir = scratch_dir();
    let bad = write_file(&dir, "bad.mat", "dim 2\n1 0\n");
    let out = opdec(&["decompose", &bad], &dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn expval_ladder_operator_in_mixed_state() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let rho = mixed_state_file(&dir);
    let out = opdec(&["expval", &a, &rho, "--out", "report.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert_eq!(report_f64(&report, "expectation_re"), 0.0);
    assert_eq!(report_f64(&report, "expectation_im"), 0.0);
    assert!(report_f64(&report, "additivity_residual") <= 1e-12);
}

#[test]
fn expval_sigma_z_in_ground_state() {
    let dir = scratch_dir();
    let z = write_file(&dir, "z.mat", "dim 2\n1 0 0 0\n0 0 -1 0\n");
    let ground = write_file(&dir, "ground.mat", "dim 2\n1 0 0 0\n0 0 0 0\n");
    let out = opdec(&["expval", &z, &ground, "--out", "report.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert_eq!(report_f64(&report, "expectation_re"), 1.0);
    assert_eq!(report_f64(&report, "expectation_im"), 0.0);
}

#[test]
fn expval_rejects_invalid_density_with_exit_3() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let not_density = write_file(&dir, "eye.mat", "dim 2\n1 0 0 0\n0 0 1 0\n");
    let out = opdec(&["expval", &a, &not_density], &dir);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("trace"),
        "stderr names the invariant: {stderr}"
    );
}

#[test]
fn epr_sim_is_deterministic_per_seed() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let args = [
        "epr-sim",
        &a,
        "--shots",
        "2000",
        "--seed",
        "7",
        "--out",
        "r1.txt",
        "--records",
        "s1.txt",
    ];
    assert!(opdec(&args, &dir).status.success());
    let args2 = [
        "epr-sim",
        &a,
        "--shots",
        "2000",
        "--seed",
        "7",
        "--out",
        "r2.txt",
        "--records",
        "s2.txt",
    ];
    assert!(opdec(&args2, &dir).status.success());
    assert_eq!(
        std::fs::read(dir.join("r1.txt")).unwrap(),
        std::fs::read(dir.join("r2.txt")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.join("s1.txt")).unwrap(),
        std::fs::read(dir.join("s2.txt")).unwrap()
    );
    // A different seed changes the stream.
    let args3 = [
        "epr-sim",
        &a,
        "--shots",
        "2000",
        "--seed",
        "8",
        "--out",
        "r3.txt",
        "--records",
        "s3.txt",
    ];
    assert!(opdec(&args3, &dir).status.success());
    assert_ne!(
        std::fs::read(dir.join("s1.txt")).unwrap(),
        std::fs::read(dir.join("s3.txt")).unwrap()
    );
}

#[test]
fn epr_sim_hermitian_operator_has_real_records() {
    let dir = scratch_dir();
    let z = write_file(&dir, "z.mat", "dim 2\n1 0 0 0\n0 0 -1 0\n");
    let out = opdec(
        &[
            "epr-sim",
            &z,
            "--shots",
            "500",
            "--seed",
            "3",
            "--records",
            "rec.txt",
        ],
        &dir,
    );
    assert!(out.status.success());
    let records = std::fs::read_to_string(dir.join("rec.txt")).unwrap();
    for line in records.lines().filter(|l| !l.starts_with('#')) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 7);
        let lambda2: f64 = fields[4].parse().unwrap();
        let combined_im: f64 = fields[6].parse().unwrap();
        assert_eq!(lambda2, 0.0);
        assert_eq!(combined_im, 0.0);
    }
}

#[test]
fn epr_sim_ladder_operator_converges_at_scale() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let out = opdec(
        &[
            "epr-sim", &a, "--shots", "100000", "--seed", "42", "--out", "r.txt",
        ],
        &dir,
    );
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    // Exact value computed in-report: Tr(A · I/2) = 0.
    assert_eq!(report_f64(&report, "exact_re"), 0.0);
    assert_eq!(report_f64(&report, "exact_im"), 0.0);
    let mean_re = report_f64(&report, "mean_re");
    let mean_im = report_f64(&report, "mean_im");
    assert!(mean_re.abs() <= 5.0 * report_f64(&report, "stderr_re"));
    assert!(mean_im.abs() <= 5.0 * report_f64(&report, "stderr_im"));
}

#[test]
fn epr_sim_zero_shots_exits_2() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let out = opdec(&["epr-sim", &a, "--shots", "0"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn epr_sim_supports_higher_dimensions() {
    let dir = scratch_dir();
    let a = write_file(
        &dir,
        "a3.mat",
        "dim 3\n1 1 0 0 0 0\n0 0 2 0 0 0\n0 0 0 0 0 -1\n",
    );
    let out = opdec(
        &[
            "epr-sim", &a, "--shots", "1000", "--seed", "5", "--out", "r.txt",
        ],
        &dir,
    );
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    assert_eq!(report_value(&report, "source"), "canonical-3");
}

#[test]
fn direct_sim_rejects_ladder_operator_with_exit_4() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let rho = mixed_state_file(&dir);
    let out = opdec(&["direct-sim", &a, &rho], &dir);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("commutator norm"),
        "stderr prints the commutator norm: {stderr}"
    );
}

#[test]
fn direct_sim_complex_diagonal_converges() {
    let dir = scratch_dir();
    let a = write_file(&dir, "diag.mat", "dim 2\n1 2 0 0\n0 0 3 -1\n");
    let rho = mixed_state_file(&dir);
    let out = opdec(
        &[
            "direct-sim",
            &a,
            &rho,
            "--shots",
            "40000",
            "--seed",
            "9",
            "--out",
            "r.txt",
        ],
        &dir,
    );
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    assert!((report_f64(&report, "exact_re") - 2.0).abs() < 1e-12);
    assert!((report_f64(&report, "exact_im") - 0.5).abs() < 1e-12);
    let mean_re = report_f64(&report, "mean_re");
    let mean_im = report_f64(&report, "mean_im");
    let se_re = report_f64(&report, "stderr_re");
    let se_im = report_f64(&report, "stderr_im");
    assert!((mean_re - 2.0).abs() <= 5.0 * se_re);
    assert!((mean_im - 0.5).abs() <= 5.0 * se_im);
}

#[test]
fn direct_sim_certain_outcome_is_constant() {
    let dir = scratch_dir();
    let z = write_file(&dir, "z.mat", "dim 2\n1 0 0 0\n0 0 -1 0\n");
    let ground = write_file(&dir, "ground.mat", "dim 2\n1 0 0 0\n0 0 0 0\n");
    let out = opdec(
        &[
            "direct-sim",
            &z,
            &ground,
            "--shots",
            "200",
            "--seed",
            "2",
            "--out",
            "r.txt",
        ],
        &dir,
    );
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    assert_eq!(report_f64(&report, "mean_re"), 1.0);
    assert_eq!(report_f64(&report, "mean_im"), 0.0);
    assert_eq!(report_f64(&report, "stderr_re"), 0.0);
}

#[test]
fn reck_identity_has_no_factors() {
    let dir = scratch_dir();
    let eye = write_file(
        &dir,
        "eye.mat",
        "dim 3\n1 0 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n",
    );
    let out = opdec(&["reck", &eye, "--out", "plan.txt"], &dir);
    assert!(out.status.success());
    let plan = std::fs::read_to_string(dir.join("plan.txt")).unwrap();
    assert_eq!(report_value(&plan, "factor_count"), "0");
    assert!(report_f64(&plan, "reconstruction_residual") <= 1e-12);
}

#[test]
fn reck_random_unitary_round_trips() {
    let dir = scratch_dir();
    let mut rng = RandomStream::seed_from_u64(60);
    let u = testutil::random_unitary(4, &mut rng);
    let path = write_file(&dir, "u.mat", &write_matrix(&u));
    let out = opdec(&["reck", &path, "--out", "plan.txt"], &dir);
    assert!(out.status.success());
    let plan = std::fs::read_to_string(dir.join("plan.txt")).unwrap();
    let count: usize = report_value(&plan, "factor_count").parse().unwrap();
    assert!(count <= 6);
    assert!(report_f64(&plan, "reconstruction_residual") <= 1e-10);
    assert_eq!(
        plan.lines().filter(|l| l.starts_with("factor ")).count(),
        count
    );
    assert_eq!(plan.lines().filter(|l| l.starts_with("phase ")).count(), 4);
}

#[test]
fn reck_rejects_non_unitary_with_exit_3() {
    let dir = scratch_dir();
    let h = write_file(&dir, "h.mat", "dim 2\n2 0 0 0\n0 0 2 0\n");
    let out = opdec(&["reck", &h], &dir);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unitarity"));
}

#[test]
fn eig_of_sigma_x() {
    let dir = scratch_dir();
    let x = write_file(&dir, "x.mat", "dim 2\n0 0 1 0\n1 0 0 0\n");
    let out = opdec(&["eig", &x, "--out", "r.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    let eigenvalues: Vec<f64> = report_value(&report, "eigenvalues")
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(eigenvalues.len(), 2);
    assert!((eigenvalues[0] + 1.0).abs() < 1e-12);
    assert!((eigenvalues[1] - 1.0).abs() < 1e-12);
    assert!(report_f64(&report, "reconstruction_residual") <= 1e-10);
}

#[test]
fn eig_of_sigma_z() {
    let dir = scratch_dir();
    let z = write_file(&dir, "z.mat", "dim 2\n1 0 0 0\n0 0 -1 0\n");
    let out = opdec(&["eig", &z, "--out", "r.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    assert_eq!(
        report_value(&report, "eigenvalues"),
        "-1.0000000000000000e0 1.0000000000000000e0"
    );
}

#[test]
fn eig_rejects_non_hermitian_with_exit_3() {
    let dir = scratch_dir();
    let a = ladder_operator_file(&dir);
    let out = opdec(&["eig", &a], &dir);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hermiticity"));
}

#[test]
fn eig_large_random_hermitian_via_files() {
    let dir = scratch_dir();
    let mut rng = RandomStream::seed_from_u64(61);
    let h = testutil::random_hermitian(8, &mut rng);
    let path = write_file(&dir, "h8.mat", &write_matrix(&h));
    let out = opdec(&["eig", &path, "--out", "r.txt"], &dir);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.txt")).unwrap();
    assert!(report_f64(&report, "reconstruction_residual") <= 1e-10);
}

#[test]
fn unknown_subcommand_exits_2() {
    let dir = scratch_dir();
    let out = opdec(&["frobnicate"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn finite_f64() -> impl Strategy<Value = f64> {
        any::<f64>().prop_filter("finite", |x| x.is_finite())
    }

    proptest! {
        // Lossless text round trip for arbitrary finite doubles, including
        // negative zero, subnormals, and extreme magnitudes.
        #[test]
        fn matrix_file_round_trip_is_bit_exact(
            values in proptest::collection::vec((finite_f64(), finite_f64()), 9)
        ) {
            let entries: Vec<Complex64> =
                values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let m = ComplexMatrix::new(3, entries).unwrap();
            let parsed = parse_matrix(&write_matrix(&m)).unwrap();
            for (a, b) in m.entries().iter().zip(parsed.entries()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
