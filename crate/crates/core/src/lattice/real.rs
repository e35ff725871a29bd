use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::kernel::rational_lattice::canonical_basis;
use crate::kernel::{hnf, ExactMatrix, ExactScalar, Field, IntMatrix};

use super::{Diagnostic, GlueGroup, LatticeError};

/// A real lattice `(V₀, Λ)` in split coordinates.
///
/// `V₀ = ℝ^g` with `Λ₊ = ℤ^g`, `Λ₋ = √−1·F·ℤ^g`, and `Λ` generated by
/// `Λ₊ ⊕ Λ₋` together with the lifts `½(a + √−1·F·b)` of the glue vectors
/// `(a|b)`. Values built with [`RealLattice::new`] are valid and have the
/// canonical basis of `M = F·ℤ^g`, so two equal lattices in the same `V₀`
/// frame compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealLattice {
    field: Field,
    period: ExactMatrix,
    glue: GlueGroup,
}

impl RealLattice {
    /// Validated, canonical lattice.
    pub fn new(field: Field, period: ExactMatrix, glue: GlueGroup) -> Result<Self, LatticeError> {
        let raw = Self::from_parts(field, period, glue)?;
        raw.validate().map_err(LatticeError::Invalid)?;
        Ok(raw.canonicalized())
    }

    /// Shape-checked only; use [`RealLattice::validate`] before relying on the
    /// lattice axioms.
    pub fn from_parts(field: Field, period: ExactMatrix, glue: GlueGroup) -> Result<Self, LatticeError> {
        let g = glue.g();
        if g == 0 {
            return Err(LatticeError::Shape("genus must be positive".into()));
        }
        if period.rows() != g || period.cols() != g {
            return Err(LatticeError::Shape(format!(
                "period matrix is {}x{} but the glue group has genus {g}",
                period.rows(),
                period.cols()
            )));
        }
        let period = period.with_field(field)?;
        Ok(RealLattice { field, period, glue })
    }

    /// Checks that `Λ` is a full lattice with `Λ ∩ V₀ = Λ₊` and
    /// `Λ ∩ √−1V₀ = Λ₋`, which also gives `Λ ⊆ ½(Λ₊ ⊕ Λ₋)`.
    pub fn validate(&self) -> Result<(), Diagnostic> {
        if self.period.determinant().map(|d| d.is_zero()).unwrap_or(true) {
            return Err(Diagnostic::SingularPeriod);
        }
        if self.glue.meets_x_block() {
            return Err(Diagnostic::GlueMeetsRealBlock);
        }
        if self.glue.meets_y_block() {
            return Err(Diagnostic::GlueMeetsImaginaryBlock);
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn canonicalized(self) -> Self {
        let canonical = canonical_basis(&self.period);
        if canonical == self.period {
            return self;
        }
        let inv = self.period.inverse().expect("validated period is invertible");
        let change = (&inv * &canonical).to_int_matrix().expect("same lattice, integral change of basis");
        let back = ExactMatrix::from_int_matrix(Field::Rational, &change)
            .inverse()
            .expect("unimodular")
            .to_int_matrix()
            .expect("unimodular inverse is integral");
        let g = self.g();
        let glue = self.glue.map_blocks(&IntMatrix::identity(g), &back);
        RealLattice { field: self.field, period: canonical, glue }
    }

    /// The `g × g` identity frame with trivial glue.
    pub fn square(g: usize) -> Self {
        Self::new(Field::Rational, ExactMatrix::identity(Field::Rational, g), GlueGroup::trivial(g))
            .expect("square lattice is valid")
    }

    /// `ℤ + √−1·α·ℤ`.
    pub fn rectangular(alpha: &ExactScalar, field: Field) -> Result<Self, LatticeError> {
        let period = ExactMatrix::new(field, 1, 1, vec![alpha.clone()])?;
        Self::new(field, period, GlueGroup::trivial(1))
    }

    /// `ℤ + (½ + √−1·α)·ℤ`; its Λ₋ is `2α√−1·ℤ`, so `F = [2α]` with glue `(1|1)`.
    pub fn diamond(alpha: &ExactScalar, field: Field) -> Result<Self, LatticeError> {
        let two_alpha = alpha * &ExactScalar::from_int(2);
        let period = ExactMatrix::new(field, 1, 1, vec![two_alpha])?;
        Self::new(field, period, GlueGroup::new(1, vec![vec![true, true]])?)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn g(&self) -> usize {
        self.glue.g()
    }

    /// Columns: a basis of `M` (with `Λ₋ = √−1·M`) in the Λ₊ basis.
    pub fn period(&self) -> &ExactMatrix {
        &self.period
    }

    pub fn glue(&self) -> &GlueGroup {
        &self.glue
    }

    pub fn has_rational_period(&self) -> bool {
        self.period.is_rational()
    }

    /// Twice the generator matrix, as integers (columns are a ℤ-basis of `2Λ`
    /// in `(x | y)` coordinates, `y` taken in the `F` basis).
    pub fn doubled_generators(&self) -> IntMatrix {
        let n = 2 * self.g();
        let two_id = IntMatrix::identity(n).map(|v| v * 2);
        let stack = two_id.vstack(&self.glue.as_int_rows());
        // upper-triangular column basis: HNF with the coordinates read backwards
        let h = hnf(&stack.reverse_columns()).0.nonzero_rows();
        h.reverse_columns().reverse_rows().transpose()
    }

    /// ℤ-basis of Λ as columns in `(x | y)` coordinates (entries in `½ℤ`).
    pub fn generators(&self) -> ExactMatrix {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        ExactMatrix::from_int_matrix(self.field, &self.doubled_generators()).scale_rational(&half)
    }

    /// `diag(I, F)`: lattice coordinates → ambient `(re | im)` coordinates.
    pub fn frame(&self) -> ExactMatrix {
        ExactMatrix::block_diagonal(&ExactMatrix::identity(self.field, self.g()), &self.period)
    }

    /// ℤ-basis of Λ in ambient `(re | im)` coordinates of `V₀ ⊗ ℂ`.
    pub fn ambient_generators(&self) -> ExactMatrix {
        &self.frame() * &self.generators()
    }

    /// Matrix of θ (complex conjugation) on the basis [`Self::generators`].
    pub fn theta_on_generators(&self) -> IntMatrix {
        let g = self.g();
        let gens = ExactMatrix::from_int_matrix(Field::Rational, &self.doubled_generators());
        let flip = ExactMatrix::from_fn(Field::Rational, 2 * g, 2 * g, |i, j| match (i == j, i < g) {
            (false, _) => ExactScalar::zero(),
            (true, true) => ExactScalar::one(),
            (true, false) => ExactScalar::from_int(-1),
        });
        let t = &(&gens.inverse().expect("full rank") * &flip) * &gens;
        t.to_int_matrix().expect("Λ is θ-stable")
    }

    /// Whether every column of `v` (ambient coordinates) lies in Λ.
    pub fn contains_ambient(&self, v: &ExactMatrix) -> bool {
        let Ok(v) = v.with_field(self.field) else {
            return false;
        };
        let p = self.ambient_generators();
        match p.solve(&v) {
            Ok(Some(coords)) => coords.is_integral(),
            _ => false,
        }
    }
}
