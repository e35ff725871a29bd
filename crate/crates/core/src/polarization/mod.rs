//! Riemann forms on real lattices: verification, the Hermitian picture,
//! existence decisions with exact certificates, and dual lattices.

mod admissible;
mod dual;
mod hermitian;

use thiserror::Error;

use crate::kernel::{ExactMatrix, Field, KernelError};
use crate::lattice::{LatticeError, RealLattice};

pub use admissible::{
    admissible_subspace, construct_default, decide_polarizable, verify_no_certificate, AdmissibleSubspace,
    PolarizabilityCertificate, SearchBudget, UnknownReport,
};
pub use dual::{bidual_witness, descent_compatible, dual_lattice, phi_h_lands_in_dual, DualLattice};
pub use hermitian::{h_to_s, s_to_h, symmetrize, HermitianForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolarizationError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("form over {form} does not fit a lattice over {lattice}")]
    FieldMismatch { form: Field, lattice: Field },
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not Hermitian")]
    NotHermitian,
    #[error("E does not vanish on V₀ × V₀ (form is not θ-compatible)")]
    NotThetaCompatible,
    #[error("E is not integral on Λ")]
    NonIntegral,
}

/// A positive definite symmetric form `S` on `V₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationForm {
    s: ExactMatrix,
}

impl PolarizationForm {
    pub fn new(s: ExactMatrix) -> Result<Self, PolarizationError> {
        if !s.is_square() {
            return Err(PolarizationError::Shape("S must be square".into()));
        }
        if !s.is_symmetric() {
            return Err(PolarizationError::NotSymmetric);
        }
        if !s.is_positive_definite()? {
            return Err(PolarizationError::NotPositiveDefinite);
        }
        Ok(PolarizationForm { s })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.s
    }

    pub fn g(&self) -> usize {
        self.s.rows()
    }
}

/// `m` rewritten over the lattice field, if its entries fit.
pub(crate) fn in_lattice_field(l: &RealLattice, m: &ExactMatrix) -> Result<ExactMatrix, PolarizationError> {
    let field = l.field();
    match m.field().join(field) {
        Some(j) if j == field => Ok(m.with_field(field)?),
        _ => Err(PolarizationError::FieldMismatch { form: m.field(), lattice: field }),
    }
}

/// `[[0, −S], [S, 0]]`: the form `E(λ₁, λ₂) = S(y₁, x₂) − S(x₁, y₂)` in
/// ambient `(re | im)` coordinates.
pub(crate) fn ambient_e(s: &ExactMatrix) -> ExactMatrix {
    let zero = ExactMatrix::zeros(s.field(), s.rows(), s.cols());
    ExactMatrix::block(&zero, &-s, s, &zero)
}

/// Values of `E` on pairs of lattice generators.
pub fn integrality_matrix(l: &RealLattice, s: &ExactMatrix) -> Result<ExactMatrix, PolarizationError> {
    if s.rows() != l.g() || s.cols() != l.g() {
        return Err(PolarizationError::Shape(format!("S must be {0}x{0}", l.g())));
    }
    let s = in_lattice_field(l, s)?;
    let p = l.ambient_generators();
    Ok(&(&p.transpose() * &ambient_e(&s)) * &p)
}

/// Whether `S` is a polarization of `L`: symmetric, positive definite and
/// `S(y₁, x₂) − S(x₁, y₂) ∈ ℤ` on a basis of Λ.
pub fn verify_polarization(l: &RealLattice, s: &ExactMatrix) -> Result<bool, PolarizationError> {
    let e = integrality_matrix(l, s)?;
    if !s.is_symmetric() || !s.is_positive_definite()? {
        return Ok(false);
    }
    Ok(e.is_integral())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ExactScalar;

    #[test]
    fn verify_examples() {
        let sq = RealLattice::square(1);
        assert!(verify_polarization(&sq, &ExactMatrix::from_i64_rows(&[&[1]])).unwrap());
        let half = ExactMatrix::new(Field::Rational, 1, 1, vec![ExactScalar::from_ratio(1, 2)]).unwrap();
        assert!(!verify_polarization(&sq, &half).unwrap());

        let f = Field::Quadratic(2);
        let s2 = ExactScalar::sqrt_of(f).unwrap();
        let rect = RealLattice::rectangular(&s2, f).unwrap();
        let s = ExactMatrix::new(f, 1, 1, vec![s2.clone()]).unwrap();
        assert!(verify_polarization(&rect, &s).unwrap());
        assert!(!verify_polarization(&rect, &ExactMatrix::from_i64_rows(&[&[1]])).unwrap());
    }

    #[test]
    fn form_checks() {
        assert_eq!(
            PolarizationForm::new(ExactMatrix::from_i64_rows(&[&[1, 2], &[2, 1]])),
            Err(PolarizationError::NotPositiveDefinite)
        );
        assert_eq!(
            PolarizationForm::new(ExactMatrix::from_i64_rows(&[&[1, 2], &[0, 1]])),
            Err(PolarizationError::NotSymmetric)
        );
        let sq = RealLattice::square(1);
        let s3 = ExactMatrix::new(Field::Quadratic(3), 1, 1, vec![ExactScalar::sqrt_of(Field::Quadratic(3)).unwrap()])
            .unwrap();
        assert!(matches!(verify_polarization(&sq, &s3), Err(PolarizationError::FieldMismatch { .. })));
    }
}
