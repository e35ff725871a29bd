//! Component group `π₀(A(ℝ))` and identity component of the real points.
//!
//! Two independent computations are kept: a rank count on the glue group and
//! the cokernel `Λ₋/(θ−1)Λ` via Smith normal form. They must agree.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::kernel::{integer_kernel, invariant_factors, ExactMatrix, Field, IntMatrix};
use crate::lattice::{f2_rank, LatticeError, RealLattice};

/// An elementary abelian 2-group `(ℤ/2)^f2_rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComponentGroup {
    pub f2_rank: usize,
}

impl ComponentGroup {
    /// Number of connected components, `2^f2_rank`.
    pub fn order(&self) -> BigInt {
        BigInt::one() << self.f2_rank
    }

    pub fn is_connected(&self) -> bool {
        self.f2_rank == 0
    }
}

/// `V₀/Λ₊`: a real torus of dimension `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityComponent {
    pub dimension: usize,
    /// Columns: ℤ-basis of Λ₊ in `V₀` coordinates.
    pub lattice_basis: IntMatrix,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComponentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cokernel of θ−1 has invariant factors {0:?}, expected only 1 and 2")]
    UnexpectedTorsion(Vec<BigInt>),
}

fn require_valid(l: &RealLattice) -> Result<(), LatticeError> {
    l.validate().map_err(LatticeError::Invalid)
}

/// `f2_rank = 2g − dim(G + X)` with `X` the x-block of `𝔽₂^{2g}`.
pub fn pi0_via_glue(l: &RealLattice) -> Result<ComponentGroup, LatticeError> {
    require_valid(l)?;
    let g = l.g();
    let mut vectors: Vec<Vec<bool>> = l.glue().basis().to_vec();
    vectors.extend((0..g).map(|i| (0..2 * g).map(|j| j == i).collect()));
    Ok(ComponentGroup { f2_rank: 2 * g - f2_rank(&vectors, 2 * g) })
}

/// Invariant factors of `Λ₋/(θ−1)Λ`, one per Λ₋ basis vector.
pub fn cohomology_invariant_factors(l: &RealLattice) -> Result<Vec<BigInt>, LatticeError> {
    require_valid(l)?;
    let g = l.g();
    let t = l.theta_on_generators();
    let id = IntMatrix::identity(2 * g);
    let minus = integer_kernel(&(&t + &id));
    if minus.cols() != g {
        return Err(LatticeError::RankDefect { g, plus: g, minus: minus.cols() });
    }
    let image = &t - &id;
    let to_q = |m: &IntMatrix| ExactMatrix::from_int_matrix(Field::Rational, m);
    let coords = to_q(&minus)
        .solve(&to_q(&image))?
        .and_then(|c| c.to_int_matrix())
        .ok_or_else(|| LatticeError::Internal("(θ−1)Λ is not inside Λ₋".into()))?;
    Ok(invariant_factors(&coords))
}

/// `f2_rank` = number of invariant factors equal to 2 in `Λ₋/(θ−1)Λ`.
pub fn pi0_via_cohomology(l: &RealLattice) -> Result<ComponentGroup, ComponentError> {
    let factors = cohomology_invariant_factors(l)?;
    let two = BigInt::from(2);
    if factors.iter().any(|d| !d.is_one() && *d != two) {
        return Err(ComponentError::UnexpectedTorsion(factors));
    }
    Ok(ComponentGroup { f2_rank: factors.iter().filter(|d| **d == two).count() })
}

pub fn identity_component(l: &RealLattice) -> IdentityComponent {
    IdentityComponent { dimension: l.g(), lattice_basis: IntMatrix::identity(l.g()) }
}
