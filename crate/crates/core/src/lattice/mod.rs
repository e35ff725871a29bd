//! Real lattices in split normal form, descended complex lattices, and the
//! maps between them.

mod descended;
mod glue;
mod real;
mod refine;

use std::fmt;

use thiserror::Error;

use crate::kernel::{Field, KernelError};

pub use descended::{complex_structure, conjugation, embed, split, DescendedLattice};
pub(crate) use glue::{bits_to_string, f2_rank};
pub use glue::GlueGroup;
pub use real::RealLattice;
pub use refine::{common_refinement, is_sublattice, verify_isomorphism};

/// Why a real lattice fails validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Diagnostic {
    SingularPeriod,
    GlueMeetsRealBlock,
    GlueMeetsImaginaryBlock,
}

impl Diagnostic {
    /// Stable machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            Diagnostic::SingularPeriod => "singular-period",
            Diagnostic::GlueMeetsRealBlock => "glue-meets-real-block",
            Diagnostic::GlueMeetsImaginaryBlock => "glue-meets-imaginary-block",
        }
    }

    pub fn message(self) -> &'static str {
        match self {
            Diagnostic::SingularPeriod => "period matrix F is singular",
            Diagnostic::GlueMeetsRealBlock => "a glue element has zero y-block, so Λ ∩ V₀ is larger than Λ₊",
            Diagnostic::GlueMeetsImaginaryBlock => "a glue element has zero x-block, so Λ ∩ √−1·V₀ is larger than Λ₋",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code(), self.message())
    }
}

/// Why a descended lattice fails validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DescendedDiagnostic {
    SingularBasis,
    NotAntiLinear,
    NotInvolution,
    NotStable,
}

impl DescendedDiagnostic {
    pub fn code(self) -> &'static str {
        match self {
            DescendedDiagnostic::SingularBasis => "singular-basis",
            DescendedDiagnostic::NotAntiLinear => "theta-not-anti-linear",
            DescendedDiagnostic::NotInvolution => "theta-not-involution",
            DescendedDiagnostic::NotStable => "lattice-not-theta-stable",
        }
    }
}

impl fmt::Display for DescendedDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid real lattice: {0}")]
    Invalid(Diagnostic),
    #[error("invalid descended lattice: {0}")]
    InvalidDescended(DescendedDiagnostic),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("the period lattices do not span the same rational space")]
    NotCommensurable,
    #[error("genus {g} but rank Λ₊ = {plus}, rank Λ₋ = {minus}")]
    RankDefect { g: usize, plus: usize, minus: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Same genus and field, or the corresponding error.
pub fn check_compatible(a: &RealLattice, b: &RealLattice) -> Result<(), LatticeError> {
    if a.field() != b.field() {
        return Err(LatticeError::FieldMismatch(a.field(), b.field()));
    }
    if a.g() != b.g() {
        return Err(LatticeError::GenusMismatch(a.g(), b.g()));
    }
    Ok(())
}
