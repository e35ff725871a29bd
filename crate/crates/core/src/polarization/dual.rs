//! The dual lattice `Λ̂` of anti-linear functionals with integral imaginary
//! part on Λ, and the map `φ_H : V → V̂`.
//!
//! A functional `ℓ` is stored through its imaginary part: the vector `c` with
//! `Im ℓ(v) = cᵀv` in ambient `(re | im)` coordinates. Multiplication by √−1
//! acts on `c` by the same matrix `J`, and `σ̂ℓ = conj ∘ ℓ ∘ θ` acts by `−θᵀ`.

use crate::kernel::{ExactMatrix, IntMatrix};
use crate::lattice::{complex_structure, conjugation, split, verify_isomorphism, DescendedLattice, RealLattice};

use super::{in_lattice_field, HermitianForm, PolarizationError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLattice {
    pub lattice: RealLattice,
    /// Ambient coordinates of `lattice` → functional coordinates `c`.
    pub witness: ExactMatrix,
}

fn dual_theta(l: &RealLattice) -> ExactMatrix {
    -&conjugation(l.field(), l.g()).transpose()
}

pub fn dual_lattice(l: &RealLattice) -> Result<DualLattice, PolarizationError> {
    l.validate().map_err(crate::lattice::LatticeError::Invalid)?;
    let p = l.ambient_generators();
    let p_hat = p.inverse()?.transpose();
    let d = DescendedLattice::new(l.field(), p_hat, dual_theta(l))?;
    let (lattice, witness) = split(&d)?;
    Ok(DualLattice { lattice, witness })
}

/// `φ_H(v) = H(v, ·)` in functional coordinates: `c = −E·v`.
fn phi(l: &RealLattice, h: &HermitianForm) -> Result<ExactMatrix, PolarizationError> {
    if h.g() != l.g() {
        return Err(PolarizationError::Shape("form and lattice differ in dimension".into()));
    }
    Ok(-&in_lattice_field(l, &h.imaginary_part())?)
}

/// Whether `φ_H ∘ θ = σ̂ ∘ φ_H` (and `φ_H` is ℂ-linear).
pub fn descent_compatible(l: &RealLattice, h: &HermitianForm) -> Result<bool, PolarizationError> {
    let phi = phi(l, h)?;
    let theta = conjugation(l.field(), l.g());
    let j = complex_structure(l.field(), l.g());
    Ok(&phi * &theta == &dual_theta(l) * &phi && &phi * &j == &j * &phi)
}

/// Whether `φ_H(Λ) ⊆ Λ̂`, checked against the split form of the dual.
pub fn phi_h_lands_in_dual(l: &RealLattice, h: &HermitianForm, dual: &DualLattice) -> Result<bool, PolarizationError> {
    let images = &phi(l, h)? * &l.ambient_generators();
    let dual_gens = &dual.witness * &dual.lattice.ambient_generators();
    Ok(match dual_gens.solve(&images)? {
        Some(c) => c.is_integral(),
        None => false,
    })
}

/// The matrix `U` on `V₀` of the evaluation map `L → dual(dual(L))`, when
/// it is an isomorphism of real lattices.
pub fn bidual_witness(l: &RealLattice) -> Result<Option<(RealLattice, IntMatrix)>, PolarizationError> {
    let first = dual_lattice(l)?;
    let second = dual_lattice(&first.lattice)?;
    // Im ev_v(ℓ_c) = cᵀv, read in the split frame of the dual
    let map = &second.witness.inverse()? * &first.witness.transpose();
    let g = l.g();
    let u = map.submatrix(0..g, 0..g);
    if map != ExactMatrix::block_diagonal(&u, &u) {
        return Ok(None);
    }
    let Some(u) = u.to_int_matrix() else {
        return Ok(None);
    };
    let ok = verify_isomorphism(l, &second.lattice, &u)?;
    Ok(ok.then_some((second.lattice, u)))
}
