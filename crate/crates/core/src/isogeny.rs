//! Imaginary isogenies between real lattices and one-dimensional normal forms.
//!
//! In split coordinates an imaginary isogeny is a unimodular `U` on `V₀`
//! with `U(ℚM) = ℚM'`, i.e. `F'⁻¹·U·F` rational. The glue never matters
//! because `Λ₊ ⊕ Λ₋` has finite index in `Λ`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::kernel::{integer_kernel, ExactMatrix, ExactScalar, Field, IntMatrix};
use crate::kernel::rational_lattice::clear_denominators;
use crate::lattice::{check_compatible, LatticeError, RealLattice};

/// Why no imaginary isogeny exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoIsogeny {
    /// `g = 1` and `F/F'` is irrational.
    IrrationalRatio(ExactScalar),
    /// Only `U = 0` maps `ℚM` into `ℚM'`.
    TrivialSolutionSpace,
    /// Every integer `U` mapping `ℚM` into `ℚM'` is singular: the determinant
    /// vanishes on a full interpolation grid of the solution space.
    SingularSolutionSpace { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(IntMatrix),
    No(NoIsogeny),
    Unknown { candidates_tried: u64 },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

pub fn verify_imaginary_isogeny(l: &RealLattice, other: &RealLattice, u: &IntMatrix) -> Result<bool, LatticeError> {
    check_compatible(l, other)?;
    let g = l.g();
    if u.rows() != g || u.cols() != g {
        return Err(LatticeError::Shape(format!("isogeny matrix must be {g}x{g}")));
    }
    if !u.is_unimodular() {
        return Ok(false);
    }
    let ue = ExactMatrix::from_int_matrix(l.field(), u);
    Ok((&(&other.period().inverse()? * &ue) * l.period()).is_rational())
}

/// Integer matrices `U` with `F'⁻¹·U·F` rational, as a ℤ-basis.
pub fn solution_space(l: &RealLattice, other: &RealLattice) -> Result<Vec<IntMatrix>, LatticeError> {
    check_compatible(l, other)?;
    let g = l.g();
    let left = other.period().inverse()?;
    let columns: Vec<Vec<ExactScalar>> = (0..g * g)
        .map(|k| {
            let unit = ExactMatrix::one_hot(l.field(), g, g, (k / g, k % g));
            let image = &(&left * &unit) * l.period();
            image.surd_parts().entries().to_vec()
        })
        .collect();
    let constraints = ExactMatrix::from_columns(Field::Rational, g * g, &columns);
    let ints = if constraints.is_zero() {
        IntMatrix::zeros(1, g * g)
    } else {
        clear_denominators(&constraints).0
    };
    let kernel = integer_kernel(&ints);
    Ok((0..kernel.cols()).map(|c| IntMatrix::from_fn(g, g, |i, j| kernel[(i * g + j, c)].clone())).collect())
}

fn combine(basis: &[IntMatrix], coeffs: &[i64], g: usize) -> IntMatrix {
    basis
        .iter()
        .zip(coeffs)
        .fold(IntMatrix::zeros(g, g), |acc, (b, &c)| &acc + &b.map(|v| v * c))
}

/// Vectors of `ℤ^r` with max-norm exactly `radius`.
fn shell(r: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![-radius; r];
    loop {
        if current.iter().any(|c| c.abs() == radius) {
            out.push(current.clone());
        }
        let mut k = 0;
        while k < r {
            if current[k] < radius {
                current[k] += 1;
                break;
            }
            current[k] = -radius;
            k += 1;
        }
        if k == r {
            return out;
        }
    }
}

/// `det(Σ xᵢBᵢ)` has degree ≤ g in each variable, so it is identically zero iff
/// it vanishes on `{0..g}^r`. Only attempted when that grid is small.
fn determinant_vanishes_identically(basis: &[IntMatrix], g: usize) -> Option<bool> {
    let r = basis.len() as u32;
    let points = (g as u64 + 1).checked_pow(r)?;
    if points > 4096 {
        return None;
    }
    let mut coeffs = vec![0i64; basis.len()];
    for n in 0..points {
        let mut rest = n;
        for c in coeffs.iter_mut() {
            *c = (rest % (g as u64 + 1)) as i64;
            rest /= g as u64 + 1;
        }
        if !combine(basis, &coeffs, g).determinant().is_zero() {
            return Some(false);
        }
    }
    Some(true)
}

fn ordering_key(l: &RealLattice) -> String {
    format!("{} {}", l.period(), l.glue())
}

fn invert_unimodular(u: &IntMatrix) -> IntMatrix {
    ExactMatrix::from_int_matrix(Field::Rational, u)
        .inverse()
        .ok()
        .and_then(|m| m.to_int_matrix())
        .expect("unimodular matrices have integral inverses")
}

/// Decides whether `l` and `other` are imaginary isogenous. Exact for `g = 1`;
/// for larger `g` at most `budget` candidate matrices are tried.
pub fn decide_imaginary_isogeny(l: &RealLattice, other: &RealLattice, budget: u64) -> Result<Decision, LatticeError> {
    check_compatible(l, other)?;
    if ordering_key(other) < ordering_key(l) {
        return Ok(match decide_ordered(other, l, budget)? {
            Decision::Yes(u) => Decision::Yes(invert_unimodular(&u)),
            d => d,
        });
    }
    decide_ordered(l, other, budget)
}

fn decide_ordered(l: &RealLattice, other: &RealLattice, budget: u64) -> Result<Decision, LatticeError> {
    let g = l.g();
    if g == 1 {
        let ratio = l.period().get(0, 0) / other.period().get(0, 0);
        return Ok(if ratio.is_rational() {
            Decision::Yes(IntMatrix::identity(1))
        } else {
            Decision::No(NoIsogeny::IrrationalRatio(ratio))
        });
    }
    let basis = solution_space(l, other)?;
    if basis.is_empty() {
        return Ok(Decision::No(NoIsogeny::TrivialSolutionSpace));
    }
    let id = IntMatrix::identity(g);
    if verify_imaginary_isogeny(l, other, &id)? {
        return Ok(Decision::Yes(id));
    }
    if determinant_vanishes_identically(&basis, g) == Some(true) {
        return Ok(Decision::No(NoIsogeny::SingularSolutionSpace { dimension: basis.len() }));
    }
    let mut tried = 0u64;
    for radius in 1.. {
        for coeffs in shell(basis.len(), radius) {
            if tried >= budget {
                return Ok(Decision::Unknown { candidates_tried: tried });
            }
            tried += 1;
            let u = combine(&basis, &coeffs, g);
            if u.determinant().abs().is_one() {
                debug_assert!(verify_imaginary_isogeny(l, other, &u).unwrap_or(false));
                return Ok(Decision::Yes(u));
            }
        }
    }
    unreachable!("the shell loop only exits by returning")
}

/// Re-checks a `No` answer for the unordered pair.
pub fn verify_no_isogeny(l: &RealLattice, other: &RealLattice, reason: &NoIsogeny) -> Result<bool, LatticeError> {
    check_compatible(l, other)?;
    let g = l.g();
    Ok(match reason {
        NoIsogeny::IrrationalRatio(_) => {
            g == 1 && !(l.period().get(0, 0) / other.period().get(0, 0)).is_rational()
        }
        NoIsogeny::TrivialSolutionSpace => {
            solution_space(l, other)?.is_empty() || solution_space(other, l)?.is_empty()
        }
        NoIsogeny::SingularSolutionSpace { .. } => [solution_space(l, other)?, solution_space(other, l)?]
            .iter()
            .any(|basis| determinant_vanishes_identically(basis, g) == Some(true)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape1D {
    /// `ℤ + √−1·α·ℤ`
    Rectangular,
    /// `ℤ + (½ + √−1·α)·ℤ`
    Diamond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm1D {
    pub kind: Shape1D,
    pub alpha: ExactScalar,
}

impl fmt::Display for NormalForm1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Shape1D::Rectangular => "rectangular",
            Shape1D::Diamond => "diamond",
        };
        write!(f, "{kind} alpha = {}", self.alpha)
    }
}

impl NormalForm1D {
    pub fn to_lattice(&self, field: Field) -> Result<RealLattice, LatticeError> {
        match self.kind {
            Shape1D::Rectangular => RealLattice::rectangular(&self.alpha, field),
            Shape1D::Diamond => RealLattice::diamond(&self.alpha, field),
        }
    }
}

pub fn normal_form_1d(l: &RealLattice) -> Result<NormalForm1D, LatticeError> {
    if l.g() != 1 {
        return Err(LatticeError::Shape(format!("normal forms exist only for g = 1, got g = {}", l.g())));
    }
    l.validate().map_err(LatticeError::Invalid)?;
    let f = l.period().get(0, 0).abs();
    Ok(if l.glue().is_trivial() {
        NormalForm1D { kind: Shape1D::Rectangular, alpha: f }
    } else {
        NormalForm1D { kind: Shape1D::Diamond, alpha: &f * &ExactScalar::from_ratio(1, 2) }
    })
}
