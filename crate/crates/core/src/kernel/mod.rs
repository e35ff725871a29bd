//! Exact arithmetic: quadratic-field scalars, matrices over the field, and
//! integer lattice algorithms.

mod integer;
mod matrix;
mod scalar;
pub mod rational_lattice;

pub use integer::{
    column_lattice_basis, hnf, integer_kernel, invariant_factors, lattice_contains, lattice_intersect, snf,
    IntMatrix,
};
pub use matrix::ExactMatrix;
pub use scalar::{ExactScalar, Field};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("radicand {0} is not a squarefree integer >= 2")]
    BadRadicand(i64),
    #[error("nonzero surd part in a rational field")]
    SurdInRationalField,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("mixed fields: {0}")]
    MixedField(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// Sign of a scalar as -1, 0 or +1.
pub fn scalar_sign(x: &ExactScalar) -> i32 {
    x.signum()
}

/// Exact positive definiteness of a symmetric matrix.
pub fn is_positive_definite(s: &ExactMatrix) -> Result<bool, KernelError> {
    s.is_positive_definite()
}
