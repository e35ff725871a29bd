//! Descended complex lattices `(V, Λ, θ)` and the split/embed correspondence
//! with real lattices.

use num_integer::Integer;

use crate::kernel::rational_lattice::{canonical_basis, integral_coordinates};
use crate::kernel::{integer_kernel, ExactMatrix, Field, IntMatrix};
#[cfg(test)]
use crate::kernel::ExactScalar;

use super::{DescendedDiagnostic, GlueGroup, LatticeError, RealLattice};

/// `V = ℂ^g` in real coordinates `(re | im)`, a lattice basis `P` (columns)
/// and an anti-linear involution `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendedLattice {
    field: Field,
    g: usize,
    basis: ExactMatrix,
    theta: ExactMatrix,
    theta_on_lattice: IntMatrix,
}

/// Multiplication by √−1 on `(re | im)` coordinates.
pub fn complex_structure(field: Field, g: usize) -> ExactMatrix {
    let id = ExactMatrix::identity(field, g);
    let zero = ExactMatrix::zeros(field, g, g);
    ExactMatrix::block(&zero, &-&id, &id, &zero)
}

/// Complex conjugation `diag(I, −I)`.
pub fn conjugation(field: Field, g: usize) -> ExactMatrix {
    let id = ExactMatrix::identity(field, g);
    ExactMatrix::block_diagonal(&id, &-&id)
}

impl DescendedLattice {
    pub fn new(field: Field, basis: ExactMatrix, theta: ExactMatrix) -> Result<Self, LatticeError> {
        let n = basis.rows();
        if n == 0 || n % 2 != 0 || !basis.is_square() || theta.rows() != n || !theta.is_square() {
            return Err(LatticeError::Shape("basis and theta must be 2g x 2g".into()));
        }
        let g = n / 2;
        let basis = basis.with_field(field)?;
        let theta = theta.with_field(field)?;
        let invalid = |d| Err(LatticeError::InvalidDescended(d));

        if basis.determinant()?.is_zero() {
            return invalid(DescendedDiagnostic::SingularBasis);
        }
        let a = theta.submatrix(0..g, 0..g);
        let b = theta.submatrix(0..g, g..n);
        if theta.submatrix(g..n, 0..g) != b || theta.submatrix(g..n, g..n) != -&a {
            return invalid(DescendedDiagnostic::NotAntiLinear);
        }
        if !(&theta * &theta).is_identity() {
            return invalid(DescendedDiagnostic::NotInvolution);
        }
        let t = &(&basis.inverse()? * &theta) * &basis;
        let Some(t) = t.to_int_matrix() else {
            return invalid(DescendedDiagnostic::NotStable);
        };
        if !t.is_unimodular() {
            return invalid(DescendedDiagnostic::NotStable);
        }
        Ok(DescendedLattice { field, g, basis, theta, theta_on_lattice: t })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn theta(&self) -> &ExactMatrix {
        &self.theta
    }

    /// θ written in the lattice basis (`P⁻¹·θ·P`).
    pub fn theta_on_lattice(&self) -> &IntMatrix {
        &self.theta_on_lattice
    }

    /// Same lattice and involution with the basis replaced by `P·W`.
    pub fn rebased(&self, w: &IntMatrix) -> Result<Self, LatticeError> {
        let w = ExactMatrix::from_int_matrix(self.field, w);
        Self::new(self.field, &self.basis * &w, self.theta.clone())
    }
}

/// Real lattice of a descended lattice, plus the ambient change of
/// coordinates `B = [E | J·E]` taking `(x | y) ∈ V₀ ⊗ ℂ` coordinates of the
/// result to the ambient coordinates of `d` (E = canonical Λ₊ basis).
pub fn split(d: &DescendedLattice) -> Result<(RealLattice, ExactMatrix), LatticeError> {
    let g = d.g;
    let field = d.field;
    let t = d.theta_on_lattice();
    let id = IntMatrix::identity(2 * g);
    let plus = integer_kernel(&(t - &id));
    let minus = integer_kernel(&(t + &id));
    if plus.cols() != g || minus.cols() != g {
        return Err(LatticeError::RankDefect { g, plus: plus.cols(), minus: minus.cols() });
    }

    let p = &d.basis;
    let e = canonical_basis(&(p * &ExactMatrix::from_int_matrix(field, &plus)));
    let plus_basis = (&p.inverse()? * &e)
        .to_int_matrix()
        .ok_or_else(|| LatticeError::Internal("canonical Λ₊ basis left the lattice".into()))?;

    let j = complex_structure(field, g);
    let minus_ambient = p * &ExactMatrix::from_int_matrix(field, &minus);
    // f = (1/√−1)·v = −J·v lies in the fixed space V₀
    let f_vectors = &(-&j) * &minus_ambient;
    let period = e
        .solve(&f_vectors)?
        .ok_or_else(|| LatticeError::Internal("Λ₋ does not lie in √−1·V₀".into()))?;

    // v = ½((v + θv) + (v − θv)) for every lattice basis vector v
    let to_exact = |m: &IntMatrix| ExactMatrix::from_int_matrix(Field::Rational, m);
    let a = integral_coordinates(&to_exact(&plus_basis), &to_exact(&(&id + t)))
        .ok_or_else(|| LatticeError::Internal("v + θv outside Λ₊".into()))?;
    let b = integral_coordinates(&to_exact(&minus), &to_exact(&(&id - t)))
        .ok_or_else(|| LatticeError::Internal("v − θv outside Λ₋".into()))?;
    let glue_vectors: Vec<Vec<bool>> = (0..2 * g)
        .map(|col| (0..g).map(|i| a[(i, col)].is_odd()).chain((0..g).map(|i| b[(i, col)].is_odd())).collect())
        .collect();

    let lattice = RealLattice::new(field, period, GlueGroup::new(g, glue_vectors)?)?;
    let witness = e.hstack(&(&j * &e));
    Ok((lattice, witness))
}

/// Descended lattice of a real lattice: `P = diag(I, F)·generators(L)`,
/// `θ = diag(I, −I)`.
pub fn embed(l: &RealLattice) -> DescendedLattice {
    DescendedLattice::new(l.field(), l.ambient_generators(), conjugation(l.field(), l.g()))
        .expect("embedding of a valid real lattice is a valid descended lattice")
}
