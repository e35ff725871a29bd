//! ℤ-lattices spanned by vectors with entries in ℚ or ℚ(√d).
//!
//! A vector over ℚ(√d) is read as a rational vector of twice the length
//! (rational and surd parts interleaved per coordinate); integer algorithms run
//! on that image after clearing one common denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{hnf, ExactMatrix, ExactScalar, Field, IntMatrix};

/// Interleaved rational coordinates of a column of `m`.
fn q_coordinates(m: &ExactMatrix, j: usize) -> Vec<BigRational> {
    let quadratic = m.field().degree() == 2;
    (0..m.rows())
        .flat_map(|i| {
            let e = m.get(i, j);
            let mut v = vec![e.rational_part().clone()];
            if quadratic {
                v.push(e.surd_part().clone());
            }
            v
        })
        .collect()
}

/// Rows = the columns of `m` written in rational coordinates, scaled to integers.
fn integer_image(m: &ExactMatrix) -> (IntMatrix, BigInt) {
    let denom = m.common_denominator();
    let rows: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| {
            q_coordinates(m, j)
                .into_iter()
                .map(|r| (r * BigRational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let width = m.rows() * m.field().degree();
    (IntMatrix::from_row_vecs(width, &rows), denom)
}

fn from_integer_image(field: Field, rows: usize, image: &IntMatrix, denom: &BigInt) -> ExactMatrix {
    let step = field.degree();
    let scale = |v: &BigInt| BigRational::new(v.clone(), denom.clone());
    ExactMatrix::from_fn(field, rows, image.rows(), |i, j| {
        let rational = scale(&image[(j, i * step)]);
        let surd = if step == 2 { scale(&image[(j, i * step + 1)]) } else { BigRational::zero() };
        ExactScalar::new(field, rational, surd).expect("coordinates lie in the field")
    })
}

/// Canonical basis (columns) of the ℤ-span of the columns of `m`.
///
/// Depends only on the lattice, not on the spanning set: it is the row HNF of
/// the rational image, mapped back.
pub fn canonical_basis(m: &ExactMatrix) -> ExactMatrix {
    let (image, denom) = integer_image(m);
    let h = hnf(&image).0.nonzero_rows();
    from_integer_image(m.field(), m.rows(), &h, &denom)
}

/// Integer `X` with `basis · X = targets`, if one exists. `basis` must have
/// full column rank.
pub fn integral_coordinates(basis: &ExactMatrix, targets: &ExactMatrix) -> Option<IntMatrix> {
    let x = basis.solve(targets).ok()??;
    x.to_int_matrix()
}

/// Whether the two column spans generate the same ℤ-lattice.
pub fn same_lattice(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let field = a.field().join(b.field()).unwrap_or(a.field());
    let a = a.with_field(field).ok();
    let b = b.with_field(field).ok();
    match (a, b) {
        (Some(a), Some(b)) => canonical_basis(&a) == canonical_basis(&b),
        _ => false,
    }
}

/// Rational matrix scaled by the lcm of its denominators.
pub fn clear_denominators(m: &ExactMatrix) -> (IntMatrix, BigInt) {
    assert!(m.is_rational(), "clear_denominators on a non-rational matrix");
    let d = m.common_denominator();
    let scaled = m.scale_rational(&BigRational::from_integer(d.clone()));
    (scaled.to_int_matrix().expect("denominators cleared"), d)
}

pub fn int_to_rational(m: &IntMatrix, denom: &BigInt) -> ExactMatrix {
    ExactMatrix::from_fn(Field::Rational, m.rows(), m.cols(), |i, j| {
        ExactScalar::from_rational(BigRational::new(m[(i, j)].clone(), denom.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_basis_ignores_spanning_set() {
        let f = Field::Quadratic(2);
        let s = ExactScalar::sqrt_of(f).unwrap();
        let one = ExactScalar::one();
        let zero = ExactScalar::zero();
        let a = ExactMatrix::from_rows(f, vec![vec![one.clone(), s.clone()], vec![zero.clone(), one.clone()]])
            .unwrap();
        let b = ExactMatrix::from_rows(
            f,
            vec![vec![&one + &s, s.clone()], vec![one.clone(), one.clone()]],
        )
        .unwrap();
        assert_eq!(canonical_basis(&a), canonical_basis(&b));
        assert_eq!(canonical_basis(&a), a);
    }

    #[test]
    fn negative_scalar_normalised() {
        let m = ExactMatrix::from_i64_rows(&[&[-3]]);
        assert_eq!(canonical_basis(&m), ExactMatrix::from_i64_rows(&[&[3]]));
    }
}
