//! Hermitian forms `H(u, v) = uᵀ(P + √−1·Q)v̄` on `V = V₀ ⊗ ℂ`.

use crate::kernel::ExactMatrix;
use crate::lattice::{complex_structure, conjugation, RealLattice};

use super::{in_lattice_field, PolarizationError, PolarizationForm};

/// `P` real symmetric, `Q` real antisymmetric. In ambient `(re | im)`
/// coordinates `Re H = [[P, Q], [−Q, P]]` and `E = Im H = [[Q, −P], [P, Q]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    p: ExactMatrix,
    q: ExactMatrix,
}

impl HermitianForm {
    pub fn new(p: ExactMatrix, q: ExactMatrix) -> Result<Self, PolarizationError> {
        if !p.is_square() || p.rows() != q.rows() || !q.is_square() {
            return Err(PolarizationError::Shape("P and Q must be square of equal size".into()));
        }
        if !p.is_symmetric() || q.transpose() != -&q {
            return Err(PolarizationError::NotHermitian);
        }
        let field = p.field().join(q.field()).ok_or(PolarizationError::NotHermitian)?;
        Ok(HermitianForm { p: p.with_field(field)?, q: q.with_field(field)? })
    }

    /// Recover `H` from `E = Im H`; `E` must be antisymmetric and
    /// `J`-invariant (`E(Ju, Jv) = E(u, v)`).
    pub fn from_imaginary_part(e: &ExactMatrix) -> Result<Self, PolarizationError> {
        let n = e.rows();
        if !e.is_square() || n % 2 != 0 {
            return Err(PolarizationError::Shape("E must be 2g x 2g".into()));
        }
        let g = n / 2;
        let j = complex_structure(e.field(), g);
        if e.transpose() != -e || &(&j.transpose() * e) * &j != *e {
            return Err(PolarizationError::NotHermitian);
        }
        Self::new(e.submatrix(g..n, 0..g), e.submatrix(0..g, 0..g))
    }

    pub fn g(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &ExactMatrix {
        &self.p
    }

    pub fn q(&self) -> &ExactMatrix {
        &self.q
    }

    pub fn real_part(&self) -> ExactMatrix {
        ExactMatrix::block(&self.p, &self.q, &-&self.q, &self.p)
    }

    pub fn imaginary_part(&self) -> ExactMatrix {
        ExactMatrix::block(&self.q, &-&self.p, &self.p, &self.q)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.real_part().is_positive_definite().unwrap_or(false)
    }

    /// `conj H(θu, θv) = H(u, v)` for complex conjugation `θ`, i.e. `θᵀEθ = −E`.
    pub fn is_theta_compatible(&self) -> bool {
        let theta = conjugation(self.p.field(), self.g());
        let e = self.imaginary_part();
        &(&theta.transpose() * &e) * &theta == -&e
    }

    /// `E` on pairs of generators of Λ.
    pub fn values_on(&self, l: &RealLattice) -> Result<ExactMatrix, PolarizationError> {
        if self.g() != l.g() {
            return Err(PolarizationError::Shape("form and lattice differ in dimension".into()));
        }
        let e = in_lattice_field(l, &self.imaginary_part())?;
        let gens = l.ambient_generators();
        Ok(&(&gens.transpose() * &e) * &gens)
    }
}

pub fn s_to_h(l: &RealLattice, s: &PolarizationForm) -> Result<HermitianForm, PolarizationError> {
    if s.g() != l.g() {
        return Err(PolarizationError::Shape("form and lattice differ in dimension".into()));
    }
    let p = in_lattice_field(l, s.matrix())?;
    let q = ExactMatrix::zeros(p.field(), p.rows(), p.cols());
    HermitianForm::new(p, q)
}

/// `S(x, y) = E(x√−1, y)`; rejects forms whose `E` is nonzero on `V₀ × V₀`.
pub fn h_to_s(l: &RealLattice, h: &HermitianForm) -> Result<PolarizationForm, PolarizationError> {
    if h.g() != l.g() {
        return Err(PolarizationError::Shape("form and lattice differ in dimension".into()));
    }
    if !h.is_theta_compatible() {
        return Err(PolarizationError::NotThetaCompatible);
    }
    PolarizationForm::new(in_lattice_field(l, h.p())?)
}

/// `H'(u, v) = H(u, v) + conj H(θu, θv)`.
pub fn symmetrize(l: &RealLattice, h: &HermitianForm) -> Result<HermitianForm, PolarizationError> {
    if !h.is_positive_definite() {
        return Err(PolarizationError::NotPositiveDefinite);
    }
    if !h.values_on(l)?.is_integral() {
        return Err(PolarizationError::NonIntegral);
    }
    let e = in_lattice_field(l, &h.imaginary_part())?;
    let theta = conjugation(e.field(), l.g());
    let pulled = &(&theta.transpose() * &e) * &theta;
    HermitianForm::from_imaginary_part(&(&e - &pulled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{ExactScalar, Field};

    fn skewed() -> HermitianForm {
        HermitianForm::new(
            ExactMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]),
            ExactMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn standard_form() {
        let l = RealLattice::square(1);
        let s = PolarizationForm::new(ExactMatrix::from_i64_rows(&[&[1]])).unwrap();
        let h = s_to_h(&l, &s).unwrap();
        assert!(h.real_part().is_identity());
        assert_eq!(h.imaginary_part(), ExactMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
        assert!(h.is_theta_compatible());
        assert_eq!(h_to_s(&l, &h).unwrap(), s);
        assert_eq!(HermitianForm::from_imaginary_part(&h.imaginary_part()).unwrap(), h);
    }

    #[test]
    fn roundtrip_over_quadratic_field() {
        let f = Field::Quadratic(5);
        let w = ExactScalar::sqrt_of(f).unwrap();
        let l = RealLattice::rectangular(&w, f).unwrap();
        let s = PolarizationForm::new(ExactMatrix::new(f, 1, 1, vec![&w + &ExactScalar::from_int(3)]).unwrap()).unwrap();
        assert_eq!(h_to_s(&l, &s_to_h(&l, &s).unwrap()).unwrap(), s);
    }

    #[test]
    fn symmetrize_skewed_form() {
        let l = RealLattice::square(2);
        let h = skewed();
        assert!(h.is_positive_definite());
        assert!(!h.is_theta_compatible());
        assert_eq!(h_to_s(&l, &h), Err(PolarizationError::NotThetaCompatible));
        let sym = symmetrize(&l, &h).unwrap();
        assert!(sym.is_theta_compatible());
        assert_eq!(sym.p(), &ExactMatrix::from_i64_rows(&[&[4, 0], &[0, 4]]));
        assert!(h_to_s(&l, &sym).is_ok());
    }

    #[test]
    fn symmetrize_doubles_compatible_forms() {
        let l = RealLattice::square(2);
        let s = PolarizationForm::new(ExactMatrix::from_i64_rows(&[&[2, 1], &[1, 3]])).unwrap();
        let h = s_to_h(&l, &s).unwrap();
        let sym = symmetrize(&l, &h).unwrap();
        assert_eq!(sym.p(), &ExactMatrix::from_i64_rows(&[&[4, 2], &[2, 6]]));
    }
}
