use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::scalar::{lcm_of_denominators, ExactScalar, Field};
use super::{IntMatrix, KernelError};

/// Dense matrix over ℚ or one real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self, KernelError> {
        if entries.len() != rows * cols {
            return Err(KernelError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| !field.admits(e)) {
            return Err(KernelError::MixedField(format!("entry {bad} does not lie in {field}")));
        }
        Ok(ExactMatrix { field, rows, cols, entries })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<ExactScalar>>) -> Result<Self, KernelError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(KernelError::Shape("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Rational matrix from small integer rows; test and fixture helper.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| ExactScalar::from_int(v)).collect())
            .collect();
        Self::from_rows(Field::Rational, data).expect("well-formed integer rows")
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> ExactScalar) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Self::new(field, rows, cols, entries).expect("generated entries lie in the field")
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix { field, rows, cols, entries: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
    }

    pub fn from_int_matrix(field: Field, m: &IntMatrix) -> Self {
        Self::from_fn(field, m.rows(), m.cols(), |i, j| ExactScalar::from_bigint(m[(i, j)].clone()))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    /// Same values, viewed in a larger (or equal) field.
    pub fn with_field(&self, field: Field) -> Result<Self, KernelError> {
        Self::new(field, self.rows, self.cols, self.entries.clone())
    }

    pub fn row(&self, i: usize) -> Vec<ExactScalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<ExactScalar>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> Self {
        let entries = self.entries.iter().map(f).collect();
        Self::new(self.field, self.rows, self.cols, entries).expect("mapped entries lie in the field")
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        self.map(|e| e * s)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_rational)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_integer)
    }

    pub fn to_int_matrix(&self) -> Option<IntMatrix> {
        let entries = self.entries.iter().map(ExactScalar::to_integer).collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::new(self.rows, self.cols, entries))
    }

    /// Rational parts as a rational matrix.
    pub fn rational_parts(&self) -> ExactMatrix {
        Self::from_fn(Field::Rational, self.rows, self.cols, |i, j| {
            ExactScalar::from_rational(self.get(i, j).rational_part().clone())
        })
    }

    /// Coefficients of √d as a rational matrix.
    pub fn surd_parts(&self) -> ExactMatrix {
        Self::from_fn(Field::Rational, self.rows, self.cols, |i, j| {
            ExactScalar::from_rational(self.get(i, j).surd_part().clone())
        })
    }

    /// Least common multiple of every rational and surd denominator.
    pub fn common_denominator(&self) -> BigInt {
        lcm_of_denominators(
            self.entries.iter().flat_map(|e| [e.rational_part(), e.surd_part()]),
        )
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let field = self.field.join(other.field).expect("hstack across fields");
        Self::from_fn(field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let field = self.field.join(other.field).expect("vstack across fields");
        Self::from_fn(field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diagonal(a: &ExactMatrix, b: &ExactMatrix) -> Self {
        let field = a.field.join(b.field).expect("block diagonal across fields");
        Self::block(
            a,
            &Self::zeros(field, a.rows, b.cols),
            &Self::zeros(field, b.rows, a.cols),
            b,
        )
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).fold(ExactScalar::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Trace pairing `tr(Aᵀ B)`.
    pub fn frobenius_dot(&self, other: &ExactMatrix) -> ExactScalar {
        self.entries.iter().zip(&other.entries).fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut a: Vec<Vec<ExactScalar>> = (0..self.rows).map(|i| self.row(i)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].inverse().expect("nonzero pivot");
            for v in a[r].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let factor = a[i][c].clone();
                    for j in 0..self.cols {
                        let sub = &factor * &a[r][j];
                        a[i][j] = &a[i][j] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (Self::from_rows(self.field, a).unwrap_or_else(|_| Self::zeros(self.field, self.rows, self.cols)), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as columns, read off the RREF (free
    /// variable set to one), so the output is canonical for the row space.
    pub fn kernel(&self) -> ExactMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let columns: Vec<Vec<ExactScalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![ExactScalar::zero(); self.cols];
                v[f] = ExactScalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect();
        Self::from_columns(self.field, self.cols, &columns)
    }

    pub fn determinant(&self) -> Result<ExactScalar, KernelError> {
        if !self.is_square() {
            return Err(KernelError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<ExactScalar>> = (0..n).map(|i| self.row(i)).collect();
        let mut det = ExactScalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(ExactScalar::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].inverse().expect("nonzero pivot");
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let factor = &a[i][c] * &inv;
                for j in c..n {
                    let sub = &factor * &a[c][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, KernelError> {
        if !self.is_square() {
            return Err(KernelError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(KernelError::Singular);
        }
        Ok(r.submatrix(0..n, n..2 * n))
    }

    /// Exact solution of `self · X = rhs` for full-column-rank `self`; `None`
    /// when the system is inconsistent.
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<Option<ExactMatrix>, KernelError> {
        if self.rows != rhs.rows {
            return Err(KernelError::Shape("solve: row mismatch".into()));
        }
        let n = self.cols;
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= n) {
            return Ok(None);
        }
        if pivots.len() < n {
            return Err(KernelError::Singular);
        }
        Ok(Some(r.submatrix(0..n, n..n + rhs.cols)))
    }

    /// Leading principal minors, top-left first.
    pub fn leading_minors(&self) -> Vec<ExactScalar> {
        (1..=self.rows)
            .map(|k| self.submatrix(0..k, 0..k).determinant().expect("square block"))
            .collect()
    }

    /// Sylvester's criterion with exact signs.
    pub fn is_positive_definite(&self) -> Result<bool, KernelError> {
        if !self.is_symmetric() {
            return Err(KernelError::NotSymmetric);
        }
        Ok(self.leading_minors().iter().all(|m| m.signum() > 0))
    }

    /// Coefficients `c_0..c_n` of `det(tI − A)` by Faddeev–LeVerrier.
    pub fn characteristic_polynomial(&self) -> Vec<ExactScalar> {
        let n = self.rows;
        let mut coeffs = vec![ExactScalar::zero(); n + 1];
        coeffs[n] = ExactScalar::one();
        let mut m = Self::zeros(self.field, n, n);
        let id = Self::identity(self.field, n);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&coeffs[n - k + 1]);
            let am = self * &m;
            coeffs[n - k] = -(am.trace() / ExactScalar::from_int(k as i64));
        }
        coeffs
    }

    /// Exact semidefiniteness of a symmetric matrix: its eigenvalues are real,
    /// so they are all nonnegative iff the characteristic polynomial has
    /// alternating coefficient signs (zeros allowed).
    pub fn is_positive_semidefinite(&self) -> Result<bool, KernelError> {
        if !self.is_symmetric() {
            return Err(KernelError::NotSymmetric);
        }
        let n = self.rows;
        let cp = self.characteristic_polynomial();
        Ok(cp.iter().enumerate().all(|(k, c)| {
            let s = c.signum();
            s == 0 || (if (n - k) % 2 == 0 { s > 0 } else { s < 0 })
        }))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64()).collect()).collect()
    }

    /// Multiply every entry by a rational.
    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.map(|e| e.scale(r))
    }

    pub fn lift_rational(field: Field, m: &ExactMatrix) -> Self {
        m.with_field(field).expect("rational matrices embed in every field")
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn one_hot(field: Field, rows: usize, cols: usize, at: (usize, usize)) -> Self {
        Self::from_fn(field, rows, cols, |i, j| {
            if (i, j) == at { ExactScalar::one() } else { ExactScalar::zero() }
        })
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = ExactScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ExactScalar {
        self.get(i, j)
    }
}

fn joined(a: &ExactMatrix, b: &ExactMatrix) -> Field {
    a.field.join(b.field).unwrap_or_else(|| panic!("matrix arithmetic across {} and {}", a.field, b.field))
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let field = joined(self, rhs);
        ExactMatrix::from_fn(field, self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(ExactScalar::zero(), |acc, k| {
                let a = self.get(i, k);
                if a.is_zero() { acc } else { acc + a * rhs.get(k, j) }
            })
        })
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sum shape mismatch");
        let field = joined(self, rhs);
        ExactMatrix::from_fn(field, self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "difference shape mismatch");
        let field = joined(self, rhs);
        ExactMatrix::from_fn(field, self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|e| -e)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> ExactScalar {
        ExactScalar::sqrt_of(Field::Quadratic(2)).unwrap()
    }

    #[test]
    fn positive_definite_examples() {
        let f = Field::Rational;
        assert!(ExactMatrix::identity(f, 3).is_positive_definite().unwrap());
        assert!(!ExactMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]).is_positive_definite().unwrap());
        let one_plus = &ExactScalar::one() + &sqrt2();
        let m = ExactMatrix::new(Field::Quadratic(2), 1, 1, vec![one_plus]).unwrap();
        assert!(m.is_positive_definite().unwrap());
        assert!(ExactMatrix::from_i64_rows(&[&[1, 2], &[3, 1]]).is_positive_definite().is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let s3 = ExactScalar::sqrt_of(Field::Quadratic(3)).unwrap();
        assert!(ExactMatrix::new(Field::Quadratic(2), 1, 2, vec![sqrt2(), s3.clone()]).is_err());
        assert!(ExactMatrix::new(Field::Rational, 1, 1, vec![s3]).is_err());
    }

    #[test]
    fn inverse_roundtrip_quadratic() {
        let f = Field::Quadratic(2);
        let m = ExactMatrix::from_rows(
            f,
            vec![vec![ExactScalar::one(), sqrt2()], vec![ExactScalar::zero(), ExactScalar::from_int(3)]],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(m.determinant().unwrap(), ExactScalar::from_int(3));
    }

    #[test]
    fn semidefinite_via_char_poly() {
        assert!(ExactMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]).is_positive_semidefinite().unwrap());
        assert!(ExactMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).is_positive_semidefinite().unwrap());
        assert!(!ExactMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]).is_positive_semidefinite().unwrap());
        assert!(!ExactMatrix::from_i64_rows(&[&[0, 0], &[0, -1]]).is_positive_semidefinite().unwrap());
        let cp = ExactMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]).characteristic_polynomial();
        assert_eq!(cp, vec![ExactScalar::from_int(3), ExactScalar::from_int(-4), ExactScalar::one()]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }
}
