//! Dense complex matrix algebra and the Hermitian eigensolver.
//!
//! Matrices are immutable values with row-major storage; every operation
//! returns a fresh result. Dimensions at play stay small (a few dozen at
//! most), so the eigensolver is a cyclic Jacobi sweep with complex plane
//! rotations: simple, robustly convergent, and dependency-free.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, the universal carrier of operators and
/// states. Constructors reject non-finite entries and zero dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries. The entry count must be `dim * dim`
    /// and every entry finite.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for (idx, e) in entries.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / dim,
                    col: idx % dim,
                });
            }
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Build from a slice of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::EntryCount {
                    dim,
                    expected: dim * dim,
                    got: row.len() * dim,
                });
            }
            entries.extend_from_slice(row);
        }
        ComplexMatrix::new(dim, entries)
    }

    /// Build entrywise from a closure. Panics on a non-finite value; meant
    /// for matrices that are finite by construction.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let e = f(i, j);
                assert!(
                    e.re.is_finite() && e.im.is_finite(),
                    "non-finite entry at ({i}, {j})"
                );
                entries.push(e);
            }
        }
        ComplexMatrix { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            dim,
            entries: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix::from_fn(dim, |i, j| if i == j { C_ONE } else { C_ZERO })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::ZeroDimension);
        }
        ComplexMatrix::new(
            diag.len(),
            (0..diag.len() * diag.len())
                .map(|idx| {
                    let (i, j) = (idx / diag.len(), idx % diag.len());
                    if i == j {
                        diag[i]
                    } else {
                        C_ZERO
                    }
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Mutable entry access for in-place kernels inside the crate. Callers
    /// must keep every entry finite.
    pub(crate) fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Entrywise transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        ComplexMatrix::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(ComplexMatrix::from_fn(self.dim, |i, j| {
            self[(i, j)] + other[(i, j)]
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(ComplexMatrix::from_fn(self.dim, |i, j| {
            self[(i, j)] - other[(i, j)]
        }))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix::from_fn(self.dim, |i, j| self[(i, j)] * factor)
    }

    /// Standard matrix product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        let d = self.dim;
        let mut entries = vec![C_ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik == C_ZERO {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += aik * other[(k, j)];
                }
            }
        }
        ComplexMatrix::new(d, entries)
    }

    /// Commutator `[x, y] = xy - yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Square root of the summed squared moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the difference.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Kronecker product; the first factor is the slow index:
    /// `(a ⊗ b)[i·db + k][j·db + l] = a[i][j] · b[k][l]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        ComplexMatrix::from_fn(da * db, |r, c| {
            self[(r / db, c / db)] * other[(r % db, c % db)]
        })
    }

    /// Trace out one subsystem of a `dim_a * dim_b` bipartite matrix,
    /// keeping the selected one. The trace is preserved.
    pub fn partial_trace(&self, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != self.dim {
            return Err(Error::BadFactorization {
                dim: self.dim,
                dim_a,
                dim_b,
            });
        }
        let out = match keep {
            Subsystem::First => ComplexMatrix::from_fn(dim_a, |i, j| {
                (0..dim_b)
                    .map(|k| self[(i * dim_b + k, j * dim_b + k)])
                    .sum()
            }),
            Subsystem::Second => ComplexMatrix::from_fn(dim_b, |k, l| {
                (0..dim_a)
                    .map(|i| self[(i * dim_b + k, i * dim_b + l)])
                    .sum()
            }),
        };
        Ok(out)
    }

    /// Frobenius norm of `M - M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint())
            .expect("same dim by construction")
            .frobenius_norm()
    }

    /// Frobenius norm of `M†M - I`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .multiply(self)
            .expect("same dim by construction")
            .sub(&ComplexMatrix::identity(self.dim))
            .expect("same dim by construction")
            .frobenius_norm()
    }

    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let asymmetry = self.hermiticity_defect();
        if asymmetry > tol {
            return Err(Error::NotHermitian { asymmetry, tol });
        }
        Ok(())
    }

    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_defect();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation, tol });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Pauli matrix σ₁ (x).
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![C_ZERO, C_ONE, C_ONE, C_ZERO]).expect("static entries")
}

/// Pauli matrix σ₂ (y).
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            C_ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            C_ZERO,
        ],
    )
    .expect("static entries")
}

/// Pauli matrix σ₃ (z).
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![C_ONE, C_ZERO, C_ZERO, Complex64::new(-1.0, 0.0)])
        .expect("static entries")
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.vectors[(i, k)] * self.eigenvalues[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    /// Orthogonal projector onto the span of the listed eigenvector columns.
    pub fn projector(&self, columns: &[usize]) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |i, j| {
            columns
                .iter()
                .map(|&k| self.vectors[(i, k)] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    /// Group eigenvalues that lie within [`tol::DEGENERACY_TOL`] of their
    /// neighbour into single outcomes. Returns `(merged value, column
    /// indices)` in ascending order; the merged value is the group mean.
    pub fn degenerate_groups(&self) -> Vec<(f64, Vec<usize>)> {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            match groups.last_mut() {
                Some((_, members))
                    if lambda - self.eigenvalues[*members.last().expect("non-empty")]
                        <= tol::DEGENERACY_TOL =>
                {
                    members.push(k);
                }
                _ => groups.push((0.0, vec![k])),
            }
        }
        for (value, members) in &mut groups {
            *value =
                members.iter().map(|&k| self.eigenvalues[k]).sum::<f64>() / members.len() as f64;
        }
        groups
    }
}

/// Eigendecompose a Hermitian matrix by cyclic Jacobi sweeps with complex
/// plane rotations. Rejects inputs whose asymmetry exceeds
/// [`tol::HERMITICITY_TOL`]; the returned system satisfies
/// `‖V·diag(λ)·V† − H‖_F ≤ 1e-10` and `‖V†V − I‖_F ≤ 1e-10`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    h.require_hermitian(tol::HERMITICITY_TOL)?;
    let d = h.dim();

    // Iterate on the exactly-Hermitian average of H and H†.
    let mut b = h
        .add(&h.adjoint())
        .expect("same dim")
        .scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(d);
    let scale = b.frobenius_norm();
    let target = tol::JACOBI_REL_TOL * scale;

    if d > 1 && scale > 0.0 {
        let mut converged = false;
        for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&b) <= target {
                converged = true;
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    jacobi_rotate(&mut b, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&b) > target {
            return Err(Error::EigNotConverged {
                sweeps: tol::JACOBI_MAX_SWEEPS,
                off_norm: off_diagonal_norm(&b),
            });
        }
    }

    // Ascending eigenvalue order; stable sort keeps Jacobi output order
    // among degenerate values.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| b[(i, i)].re.total_cmp(&b[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| b[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);

    let system = HermitianEigensystem {
        eigenvalues,
        vectors,
    };
    let unitarity = system.vectors.unitarity_defect();
    let residual = system.reconstruct().frobenius_distance(h)?;
    if unitarity > tol::UNITARITY_TOL || residual > tol::HERMITICITY_TOL {
        return Err(Error::Inconsistency(format!(
            "eigensystem invariants violated: unitarity defect {unitarity:e}, \
             reconstruction residual {residual:e}"
        )));
    }
    Ok(system)
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation zeroing `b[p][q]` (and by Hermiticity
/// `b[q][p]`), applied in place as `b ← U† b U`, `v ← v U`.
fn jacobi_rotate(b: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = b[(p, q)];
    let beta_mod = beta.norm();
    if beta_mod < 1e-300 {
        return;
    }
    // Unit phase of the pivot entry; writing beta = |beta| w reduces the
    // 2x2 block to a real rotation problem.
    let w = beta / beta_mod;
    let alpha = b[(p, p)].re;
    let gamma = b[(q, q)].re;
    let tau = (gamma - alpha) / (2.0 * beta_mod);
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = b.dim();
    let sw = w * s;
    // Column update: b ← b U with U[p][p]=c, U[p][q]=s·w, U[q][p]=−s·w̄,
    // U[q][q]=c.
    for k in 0..d {
        let bkp = b[(k, p)];
        let bkq = b[(k, q)];
        b.entries[k * d + p] = bkp * c - bkq * sw.conj();
        b.entries[k * d + q] = bkp * sw + bkq * c;
    }
    // Row update: b ← U† b.
    for k in 0..d {
        let bpk = b[(p, k)];
        let bqk = b[(q, k)];
        b.entries[p * d + k] = bpk * c - bqk * sw;
        b.entries[q * d + k] = bpk * sw.conj() + bqk * c;
    }
    // Pin the pivot pair to its exact post-rotation form.
    b.entries[p * d + q] = C_ZERO;
    b.entries[q * d + p] = C_ZERO;
    b.entries[p * d + p] = Complex64::new(b[(p, p)].re, 0.0);
    b.entries[q * d + q] = Complex64::new(b[(q, q)].re, 0.0);

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v.entries[k * d + p] = vkp * c - vkq * sw.conj();
        v.entries[k * d + q] = vkp * sw + vkq * c;
    }
}
