//! Cartesian decomposition: split any operator into two self-adjoint parts,
//! `A = A₁ + iA₂`, the operator analogue of real and imaginary components
//! of a complex number. The parts commute exactly when the operator is
//! normal; that commutator is the gate between direct joint measurement and
//! the counterfactual protocol.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tol;

/// The pair `(re, im)` of Hermitian parts together with the Frobenius norm
/// of their commutator and the normality verdict at the tolerance the
/// decomposition was taken with.
#[derive(Debug, Clone)]
pub struct CartesianDecomposition {
    /// Hermitian real part, `(A + A†)/2`.
    pub re: ComplexMatrix,
    /// Hermitian imaginary part, `-(i/2)(A - A†)`.
    pub im: ComplexMatrix,
    /// `‖[re, im]‖_F`.
    pub commutator_norm: f64,
    /// `commutator_norm <= tolerance`.
    pub normal: bool,
}

impl CartesianDecomposition {
    /// Assemble a decomposition from given Hermitian parts. Both parts must
    /// pass the part-level Hermiticity test.
    pub fn from_parts(re: ComplexMatrix, im: ComplexMatrix, normality_tol: f64) -> Result<Self> {
        if normality_tol <= 0.0 {
            return Err(Error::NonPositiveTolerance { tol: normality_tol });
        }
        re.require_hermitian(tol::PART_HERMITICITY_TOL)?;
        im.require_hermitian(tol::PART_HERMITICITY_TOL)?;
        let commutator_norm = re.commutator(&im)?.frobenius_norm();
        Ok(CartesianDecomposition {
            re,
            im,
            commutator_norm,
            normal: commutator_norm <= normality_tol,
        })
    }
}

/// Hermitian real part `(a + a†)/2`.
pub fn real_part(a: &ComplexMatrix) -> ComplexMatrix {
    a.add(&a.adjoint())
        .expect("same dim")
        .scale(Complex64::new(0.5, 0.0))
}

/// Hermitian imaginary part `-(i/2)(a - a†)`.
pub fn imag_part(a: &ComplexMatrix) -> ComplexMatrix {
    a.sub(&a.adjoint())
        .expect("same dim")
        .scale(Complex64::new(0.0, -0.5))
}

/// Default normality tolerance for an operator: scales with the squared
/// Frobenius norm, floored at the base tolerance.
pub fn default_normality_tolerance(a: &ComplexMatrix) -> f64 {
    tol::normality_tolerance(a.frobenius_norm())
}

/// Decompose with the default normality tolerance.
pub fn decompose(a: &ComplexMatrix) -> Result<CartesianDecomposition> {
    decompose_with_tolerance(a, default_normality_tolerance(a))
}

/// Decompose `a` into Hermitian parts and classify normality at the given
/// tolerance. The round trip `re + i·im` is verified against the source.
pub fn decompose_with_tolerance(
    a: &ComplexMatrix,
    normality_tol: f64,
) -> Result<CartesianDecomposition> {
    if normality_tol <= 0.0 {
        return Err(Error::NonPositiveTolerance { tol: normality_tol });
    }
    let decomposition =
        CartesianDecomposition::from_parts(real_part(a), imag_part(a), normality_tol)?;
    let residual = recompose(&decomposition).frobenius_distance(a)?;
    if residual > tol::ROUND_TRIP_TOL {
        return Err(Error::Inconsistency(format!(
            "decomposition round trip residual {residual:e} exceeds {:e}",
            tol::ROUND_TRIP_TOL
        )));
    }
    Ok(decomposition)
}

/// Reassemble `re + i·im`.
pub fn recompose(d: &CartesianDecomposition) -> ComplexMatrix {
    d.re.add(&d.im.scale(Complex64::new(0.0, 1.0)))
        .expect("same dim")
}

/// Whether the operator is normal at tolerance `tol`, judged by the
/// commutator of its Hermitian parts. The equivalent adjoint criterion
/// `‖a†a − aa†‖_F ≤ 2·tol` is computed as a cross-check; disagreement is an
/// internal-consistency error.
pub fn is_normal(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    if tol <= 0.0 {
        return Err(Error::NonPositiveTolerance { tol });
    }
    let parts_norm = real_part(a).commutator(&imag_part(a))?.frobenius_norm();
    let adjoint_norm = a
        .adjoint()
        .multiply(a)?
        .sub(&a.multiply(&a.adjoint())?)?
        .frobenius_norm();
    let via_parts = parts_norm <= tol;
    let via_adjoint = adjoint_norm <= 2.0 * tol;
    if via_parts != via_adjoint {
        return Err(Error::Inconsistency(format!(
            "normality criteria disagree: ‖[A₁,A₂]‖={parts_norm:e} vs ‖A†A−AA†‖={adjoint_norm:e} \
             at tolerance {tol:e}"
        )));
    }
    Ok(via_parts)
}

/// `is_normal` at the default tolerance for `a`.
pub fn is_normal_default(a: &ComplexMatrix) -> Result<bool> {
    is_normal(a, default_normality_tolerance(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, pauli_y, pauli_z};
    use crate::rng::RandomStream;
    use crate::testutil;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ladder_operator() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn real_part_of_ladder_operator_is_half_sigma_x() {
        let a1 = real_part(&ladder_operator());
        let expected = pauli_x().scale(c(0.5, 0.0));
        assert_eq!(a1, expected);
    }

    #[test]
    fn imag_part_of_ladder_operator_is_minus_half_sigma_y() {
        let a2 = imag_part(&ladder_operator());
        let expected = pauli_y().scale(c(-0.5, 0.0));
        assert_eq!(a2, expected);
    }

    #[test]
    fn hermitian_input_decomposes_trivially() {
        let mut rng = RandomStream::seed_from_u64(10);
        let h = testutil::random_hermitian(4, &mut rng);
        assert!(real_part(&h).frobenius_distance(&h).unwrap() < 1e-15);
        assert!(imag_part(&h).frobenius_norm() < 1e-15);
    }

    #[test]
    fn anti_hermitian_input_has_zero_real_part() {
        let mut rng = RandomStream::seed_from_u64(11);
        let k = testutil::random_hermitian(3, &mut rng);
        let ik = k.scale(c(0.0, 1.0));
        assert!(real_part(&ik).frobenius_norm() < 1e-15);
        assert!(imag_part(&ik).frobenius_distance(&k).unwrap() < 1e-15);
    }

    #[test]
    fn scalar_case_matches_complex_components() {
        let a = ComplexMatrix::new(1, vec![c(3.25, -1.5)]).unwrap();
        let d = decompose(&a).unwrap();
        assert_eq!(d.re[(0, 0)], c(3.25, 0.0));
        assert_eq!(d.im[(0, 0)], c(-1.5, 0.0));
        assert!(d.normal);
        assert_eq!(recompose(&d), a);
    }

    #[test]
    fn scalar_imag_part_of_scaled_identity() {
        let a = ComplexMatrix::identity(3).scale(c(2.0, -0.75));
        let expected = ComplexMatrix::identity(3).scale(c(-0.75, 0.0));
        assert!(imag_part(&a).frobenius_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn ladder_operator_decomposition() {
        let d = decompose(&ladder_operator()).unwrap();
        assert_eq!(d.re, pauli_x().scale(c(0.5, 0.0)));
        assert_eq!(d.im, pauli_y().scale(c(-0.5, 0.0)));
        assert!(!d.normal);
        // Hand oracle: [σ₁/2, −σ₂/2] = −(1/4)[σ₁,σ₂] = −(i/2)σ₃, whose
        // Frobenius norm is √½.
        assert!((d.commutator_norm - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!(d.commutator_norm > 0.0);
    }

    #[test]
    fn hermitian_operator_is_normal_with_zero_imag() {
        let d = decompose(&pauli_z()).unwrap();
        assert_eq!(d.re, pauli_z());
        assert_eq!(d.im.frobenius_norm(), 0.0);
        assert!(d.normal);
    }

    #[test]
    fn random_unitary_is_normal() {
        let mut rng = RandomStream::seed_from_u64(12);
        for _ in 0..10 {
            let u = testutil::random_unitary(4, &mut rng);
            let d = decompose(&u).unwrap();
            assert!(
                d.normal,
                "unitary with commutator norm {}",
                d.commutator_norm
            );
            assert!(d.commutator_norm <= default_normality_tolerance(&u));
        }
    }

    #[test]
    fn recompose_round_trips_random_matrices() {
        let mut rng = RandomStream::seed_from_u64(13);
        let a = testutil::random_matrix(6, &mut rng);
        let d = decompose(&a).unwrap();
        assert!(recompose(&d).frobenius_distance(&a).unwrap() <= 1e-12);
    }

    #[test]
    fn recompose_from_given_parts_rebuilds_ladder_operator() {
        let d = CartesianDecomposition::from_parts(
            pauli_x().scale(c(0.5, 0.0)),
            pauli_y().scale(c(-0.5, 0.0)),
            1e-10,
        )
        .unwrap();
        assert!(
            recompose(&d)
                .frobenius_distance(&ladder_operator())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn recompose_of_zero_parts_is_zero() {
        let d = CartesianDecomposition::from_parts(
            ComplexMatrix::zeros(2),
            ComplexMatrix::zeros(2),
            1e-10,
        )
        .unwrap();
        assert_eq!(recompose(&d), ComplexMatrix::zeros(2));
    }

    #[test]
    fn from_parts_rejects_non_hermitian_parts() {
        let err =
            CartesianDecomposition::from_parts(ladder_operator(), ComplexMatrix::zeros(2), 1e-10);
        assert!(matches!(err, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_combination_is_normal() {
        let h = pauli_x().add(&pauli_z().scale(c(2.0, 0.0))).unwrap();
        assert!(is_normal_default(&h).unwrap());
    }

    #[test]
    fn ladder_operator_is_not_normal() {
        assert!(!is_normal_default(&ladder_operator()).unwrap());
    }

    #[test]
    fn normal_by_construction_is_normal() {
        let mut rng = RandomStream::seed_from_u64(14);
        for _ in 0..10 {
            let n = testutil::random_normal_matrix(4, &mut rng);
            assert!(is_normal_default(&n).unwrap());
        }
    }

    #[test]
    fn trace_additivity_against_expectation() {
        let mut rng = RandomStream::seed_from_u64(15);
        let a = testutil::random_matrix(4, &mut rng);
        let rho = testutil::random_density(4, &mut rng);
        let d = decompose(&a).unwrap();
        let full = rho.matrix().multiply(&a).unwrap().trace();
        let re = rho.matrix().multiply(&d.re).unwrap().trace();
        let im = rho.matrix().multiply(&d.im).unwrap().trace();
        let combined = re + im * c(0.0, 1.0);
        assert!((full - combined).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_tolerance() {
        assert!(matches!(
            decompose_with_tolerance(&pauli_x(), 0.0),
            Err(Error::NonPositiveTolerance { .. })
        ));
        assert!(matches!(
            is_normal(&pauli_x(), -1.0),
            Err(Error::NonPositiveTolerance { .. })
        ));
    }
}
