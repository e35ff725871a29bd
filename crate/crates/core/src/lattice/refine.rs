//! Lattices sharing a Λ₊ frame: intersections, containment and isomorphisms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::kernel::rational_lattice::{clear_denominators, int_to_rational};
use crate::kernel::{lattice_intersect, ExactMatrix, Field, IntMatrix};

use super::{check_compatible, GlueGroup, LatticeError, RealLattice};

/// `F⁻¹·F'`, required to be rational (`ℚM = ℚM'`).
fn period_ratio(l: &RealLattice, other: &RealLattice) -> Result<ExactMatrix, LatticeError> {
    let r = &l.period().inverse()? * other.period();
    if !r.is_rational() {
        return Err(LatticeError::NotCommensurable);
    }
    Ok(r.with_field(Field::Rational)?)
}

/// Generators of `other`, written in the `(x | y-in-F)` coordinates of `l`.
fn generators_in_frame_of(l: &RealLattice, other: &RealLattice) -> Result<ExactMatrix, LatticeError> {
    let r = &l.period().inverse()? * other.period();
    let g = l.g();
    let frame = ExactMatrix::block_diagonal(&ExactMatrix::identity(l.field(), g), &r);
    Ok(&frame * &other.generators())
}

fn intersect_rational(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (both, denom) = clear_denominators(&a.hstack(b));
    let n = both.rows();
    let ia = IntMatrix::from_fn(n, a.cols(), |i, j| both[(i, j)].clone());
    let ib = IntMatrix::from_fn(n, b.cols(), |i, j| both[(i, a.cols() + j)].clone());
    int_to_rational(&lattice_intersect(&ia, &ib), &denom)
}

/// The lattice `Λ ∩ Λ'` for two real lattices with the same Λ₊ frame and
/// commensurable period lattices.
pub fn common_refinement(l: &RealLattice, other: &RealLattice) -> Result<RealLattice, LatticeError> {
    check_compatible(l, other)?;
    let g = l.g();
    let r = period_ratio(l, other)?;
    let mine = l.generators().with_field(Field::Rational)?;
    let theirs = generators_in_frame_of(l, other)?.with_field(Field::Rational)?;
    let meet = intersect_rational(&mine, &theirs);

    // Λ₋ ∩ Λ₋' in F-coordinates
    let c = intersect_rational(&ExactMatrix::identity(Field::Rational, g), &r);
    let period = l.period() * &c.with_field(l.field())?;
    let c_inv = c.inverse()?;
    let y = &c_inv * &meet.submatrix(g..2 * g, 0..meet.cols());
    let x = meet.submatrix(0..g, 0..meet.cols());
    let two = BigInt::from(2);
    let bit = |e: &crate::kernel::ExactScalar| -> Result<bool, LatticeError> {
        let doubled = e.rational_part() * num_rational::BigRational::from_integer(two.clone());
        if !doubled.is_integer() {
            return Err(LatticeError::Internal("intersection is not inside ½(Λ₊ ⊕ Λ₋)".into()));
        }
        Ok(doubled.to_integer().is_odd())
    };
    let mut glue_vectors = Vec::with_capacity(meet.cols());
    for j in 0..meet.cols() {
        let mut v = Vec::with_capacity(2 * g);
        for i in 0..g {
            v.push(bit(x.get(i, j))?);
        }
        for i in 0..g {
            v.push(bit(y.get(i, j))?);
        }
        glue_vectors.push(v);
    }
    RealLattice::new(l.field(), period, GlueGroup::new(g, glue_vectors)?)
}

/// Whether `inner ⊆ outer` as lattices in the common `V₀ ⊗ ℂ`.
pub fn is_sublattice(inner: &RealLattice, outer: &RealLattice) -> Result<bool, LatticeError> {
    check_compatible(inner, outer)?;
    let targets = generators_in_frame_of(outer, inner)?;
    Ok(match outer.generators().solve(&targets)? {
        Some(coords) => coords.is_integral(),
        None => false,
    })
}

/// Whether `U` on `V₀` (in the Λ₊ bases) extends to an isomorphism
/// `from → to`, i.e. `U_ℂ(Λ) = Λ'`.
pub fn verify_isomorphism(from: &RealLattice, to: &RealLattice, u: &IntMatrix) -> Result<bool, LatticeError> {
    check_compatible(from, to)?;
    let g = from.g();
    if u.rows() != g || u.cols() != g {
        return Err(LatticeError::Shape(format!("isomorphism matrix must be {g}x{g}")));
    }
    if !u.is_unimodular() {
        return Ok(false);
    }
    let field = from.field();
    let ue = ExactMatrix::from_int_matrix(field, u);
    let w = &(&to.period().inverse()? * &ue) * from.period();
    if !w.is_integral() {
        return Ok(false);
    }
    let map = ExactMatrix::block_diagonal(&ue, &w);
    let change = &(&to.generators().inverse()? * &map) * &from.generators();
    Ok(match change.to_int_matrix() {
        Some(c) => !c.determinant().is_zero() && c.is_unimodular(),
        None => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ExactScalar;

    fn rect(alpha: ExactScalar, field: Field) -> RealLattice {
        RealLattice::rectangular(&alpha, field).unwrap()
    }

    #[test]
    fn rectangular_meets_diamond() {
        let f = Field::Quadratic(2);
        let a = ExactScalar::sqrt_of(f).unwrap();
        let r = rect(a.clone(), f);
        let d = RealLattice::diamond(&a, f).unwrap();
        let meet = common_refinement(&r, &d).unwrap();
        assert!(meet.glue().is_trivial());
        assert_eq!(meet.period().get(0, 0), &(&a * &ExactScalar::from_int(2)));
        assert!(is_sublattice(&meet, &r).unwrap() && is_sublattice(&meet, &d).unwrap());
    }

    #[test]
    fn refinement_examples() {
        let q = Field::Rational;
        let one = rect(ExactScalar::one(), q);
        let three = rect(ExactScalar::from_int(3), q);
        assert_eq!(common_refinement(&one, &three).unwrap(), three);
        assert_eq!(common_refinement(&one, &one).unwrap(), one);
        let f = Field::Quadratic(2);
        let s = ExactScalar::sqrt_of(f).unwrap();
        let a = rect(s.clone(), f);
        let b = rect(&s + &ExactScalar::one(), f);
        assert_eq!(common_refinement(&a, &b), Err(LatticeError::NotCommensurable));
    }

    #[test]
    fn isomorphisms() {
        let q = Field::Rational;
        let l = rect(ExactScalar::from_int(2), q);
        let neg = IntMatrix::from_rows(&[&[-1]]);
        assert!(verify_isomorphism(&l, &l, &neg).unwrap());
        assert!(!verify_isomorphism(&l, &rect(ExactScalar::from_int(4), q), &IntMatrix::identity(1)).unwrap());
        let sq = RealLattice::square(2);
        let swap = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert!(verify_isomorphism(&sq, &sq, &swap).unwrap());
    }
}
