//! Deterministic random generators backing the test and acceptance suites.
//! Everything draws from a caller-owned [`RandomStream`], so fixed seeds
//! give fixed fixtures.

use num_complex::Complex64;

use crate::linalg::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
use crate::multiport::TwoLevelRotation;
use crate::rng::RandomStream;
use crate::state::DensityState;

/// Complex scalar with both components uniform in `[-1, 1)`.
pub fn random_complex(rng: &mut RandomStream) -> Complex64 {
    Complex64::new(rng.next_range(-1.0, 1.0), rng.next_range(-1.0, 1.0))
}

/// Dense matrix with independent uniform entries.
pub fn random_matrix(dim: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| random_complex(rng)).collect();
    ComplexMatrix::new(dim, entries).expect("finite by construction")
}

/// Hermitian matrix built as `(B + B†)/2`.
pub fn random_hermitian(dim: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let b = random_matrix(dim, rng);
    b.add(&b.adjoint())
        .expect("same dim")
        .scale(Complex64::new(0.5, 0.0))
}

/// Haar-ish unitary: a full triangle of random two-level rotations followed
/// by random output phases. Dense for generic draws.
pub fn random_unitary(dim: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let mut u = ComplexMatrix::from_diagonal(
        &(0..dim)
            .map(|_| Complex64::from_polar(1.0, rng.next_range(0.0, 2.0 * std::f64::consts::PI)))
            .collect::<Vec<_>>(),
    )
    .expect("non-empty");
    for m in 0..dim {
        for n in (m + 1)..dim {
            let theta = rng.next_range(0.0, std::f64::consts::FRAC_PI_2);
            let phi = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
            let rot = TwoLevelRotation::new(m, n, theta, phi)
                .expect("parameters in range")
                .embed(dim)
                .expect("modes in range");
            u = rot.multiply(&u).expect("same dim");
        }
    }
    u
}

/// Normal matrix built as `V · diag(z) · V†` for random unitary `V` and
/// random complex diagonal.
pub fn random_normal_matrix(dim: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let v = random_unitary(dim, rng);
    let diag =
        ComplexMatrix::from_diagonal(&(0..dim).map(|_| random_complex(rng)).collect::<Vec<_>>())
            .expect("non-empty");
    v.multiply(&diag)
        .expect("same dim")
        .multiply(&v.adjoint())
        .expect("same dim")
}

/// Mixed density matrix `GG†/Tr(GG†)`; full rank for generic draws.
pub fn random_density(dim: usize, rng: &mut RandomStream) -> DensityState {
    let g = random_matrix(dim, rng);
    let gram = g.multiply(&g.adjoint()).expect("same dim");
    let trace = gram.trace().re;
    let rho = gram.scale(Complex64::new(1.0 / trace, 0.0));
    // Hermitize away the last bits of rounding noise.
    let rho = rho
        .add(&rho.adjoint())
        .expect("same dim")
        .scale(Complex64::new(0.5, 0.0));
    DensityState::new(rho).expect("Gram matrix is a valid density matrix")
}

/// Uniformly random point on the unit sphere (rejection sampling).
pub fn random_unit_vector3(rng: &mut RandomStream) -> [f64; 3] {
    loop {
        let v = [
            rng.next_range(-1.0, 1.0),
            rng.next_range(-1.0, 1.0),
            rng.next_range(-1.0, 1.0),
        ];
        let norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if norm_sq > 1e-4 && norm_sq <= 1.0 {
            let norm = norm_sq.sqrt();
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// Spin observable `n·σ` along a unit direction.
pub fn spin_along(n: [f64; 3]) -> ComplexMatrix {
    pauli_x()
        .scale(Complex64::new(n[0], 0.0))
        .add(&pauli_y().scale(Complex64::new(n[1], 0.0)))
        .expect("same dim")
        .add(&pauli_z().scale(Complex64::new(n[2], 0.0)))
        .expect("same dim")
}
