//! Text formats: matrix files, machine reports, and record streams.
//!
//! Every float is serialized with 17 significant digits, which round-trips
//! any finite double exactly; identical inputs therefore produce
//! byte-identical outputs.

use opdec_core::{Complex64, ComplexMatrix};

use crate::CliError;

/// 17-significant-digit scientific form, lossless for finite doubles.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shorter form for human summaries.
pub fn fmt_f64_short(x: f64) -> String {
    format!("{x:.6e}")
}

pub fn fmt_complex_short(z: Complex64) -> String {
    format!("{:.6e} {:+.6e}i", z.re, z.im)
}

/// FNV-1a 64-bit digest, hex encoded with an algorithm prefix.
pub fn digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("fnv1a64:{hash:016x}")
}

/// Serialize a matrix: a `dim N` header, then one row per line holding
/// `re im` pairs in row-major order.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let d = m.dim();
    let mut out = String::new();
    out.push_str(&format!("dim {d}\n"));
    for i in 0..d {
        let row: Vec<String> = (0..d)
            .map(|j| {
                let e = m[(i, j)];
                format!("{} {}", fmt_f64(e.re), fmt_f64(e.im))
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the matrix format. Blank lines and `#` comments are ignored.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let header = lines.next().ok_or("empty matrix file")?;
    let dim: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", n] => n
            .parse()
            .map_err(|_| format!("bad dimension {n:?} in header"))?,
        _ => return Err(format!("expected `dim N` header, found {header:?}")),
    };
    if dim == 0 {
        return Err("dimension must be at least 1".into());
    }

    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let line = lines.next().ok_or(format!("missing row {i}"))?;
        let numbers: Vec<&str> = line.split_whitespace().collect();
        if numbers.len() != 2 * dim {
            return Err(format!(
                "row {i} holds {} numbers, expected {} (re im pairs)",
                numbers.len(),
                2 * dim
            ));
        }
        for pair in numbers.chunks(2) {
            let re: f64 = pair[0]
                .parse()
                .map_err(|_| format!("bad number {:?} in row {i}", pair[0]))?;
            let im: f64 = pair[1]
                .parse()
                .map_err(|_| format!("bad number {:?} in row {i}", pair[1]))?;
            entries.push(Complex64::new(re, im));
        }
    }
    if let Some(extra) = lines.next() {
        return Err(format!("unexpected trailing content: {extra:?}"));
    }
    ComplexMatrix::new(dim, entries).map_err(|e| e.to_string())
}

/// A matrix input: parsed entries plus the digest of the file bytes.
pub struct MatrixInput {
    pub role: &'static str,
    pub digest: String,
    pub matrix: ComplexMatrix,
}

pub fn load_matrix(role: &'static str, path: &std::path::Path) -> Result<MatrixInput, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {role} file {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{role} file {} is not UTF-8", path.display())))?;
    let matrix = parse_matrix(&text)
        .map_err(|e| CliError::Usage(format!("{role} file {}: {e}", path.display())))?;
    Ok(MatrixInput {
        role,
        digest: digest(&bytes),
        matrix,
    })
}

/// Line-oriented machine report. Keys are emitted in call order so a fixed
/// command pipeline yields fixed bytes.
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Report { lines: Vec::new() };
        report.lines.push("opdec-report v1".to_string());
        report.push("command", command);
        report.push("version", env!("CARGO_PKG_VERSION"));
        report.push("rng", opdec_core::RNG_ID);
        report
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key} {value}"));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn push_input(&mut self, input: &MatrixInput) {
        self.push(&format!("input.{}", input.role), &input.digest);
    }

    pub fn push_f64_list(&mut self, key: &str, values: &[f64]) {
        let joined: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        self.push(key, joined.join(" "));
    }

    pub fn push_matrix(&mut self, name: &str, m: &ComplexMatrix) {
        self.lines.push(format!("matrix {name}"));
        let block = write_matrix(m);
        for line in block.lines() {
            self.lines.push(line.to_string());
        }
    }

    pub fn finish(mut self) -> String {
        self.lines.push("end".to_string());
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
