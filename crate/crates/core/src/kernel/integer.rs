//! Integer matrices: Hermite and Smith normal forms, saturated kernels and
//! lattice intersection.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        IntMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.iter().flat_map(|row| row.iter().map(|&v| BigInt::from(v))).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        Self::new(rows, cols, (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_row_vecs(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        Self::new(rows.len(), cols, rows.iter().flatten().cloned().collect())
    }

    pub fn from_column_vecs(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn vstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)].clone() } else { other[(i - self.rows, j)].clone() }
        })
    }

    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> Self {
        let picked: Vec<Vec<BigInt>> = rows.into_iter().map(|i| self.row(i).to_vec()).collect();
        Self::from_row_vecs(self.cols, &picked)
    }

    pub fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        Self::new(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Reverses column order; used to take triangular forms "from the other end".
    pub fn reverse_columns(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, self.cols - 1 - j)].clone())
    }

    pub fn reverse_rows(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(self.rows - 1 - i, j)].clone())
    }

    /// Rank over ℚ (number of nonzero rows of the HNF).
    pub fn rank(&self) -> usize {
        hnf(self).0.nonzero_row_count()
    }

    fn nonzero_row_count(&self) -> usize {
        (0..self.rows).filter(|&i| self.row(i).iter().any(|v| !v.is_zero())).count()
    }

    /// Rows `0..k` where `k` counts the nonzero rows; meaningful on echelon forms.
    pub fn nonzero_rows(&self) -> Self {
        let k = self.nonzero_row_count();
        self.select_rows(0..k)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl std::ops::Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "product shape mismatch");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(BigInt::zero(), |acc, k| acc + &self[(i, k)] * &rhs[(k, j)])
        })
    }
}

impl std::ops::Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl std::ops::Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// Row operations carried out on a working matrix and its transform together.
struct Rows<'a> {
    a: &'a mut IntMatrix,
    u: &'a mut IntMatrix,
}

impl Rows<'_> {
    fn swap(&mut self, i: usize, j: usize) {
        for m in [&mut *self.a, &mut *self.u] {
            for c in 0..m.cols {
                m.entries.swap(i * m.cols + c, j * m.cols + c);
            }
        }
    }

    fn negate(&mut self, i: usize) {
        for m in [&mut *self.a, &mut *self.u] {
            for c in 0..m.cols {
                m[(i, c)] = -&m[(i, c)];
            }
        }
    }

    /// row_i -= q · row_j
    fn axpy(&mut self, i: usize, q: &BigInt, j: usize) {
        if q.is_zero() {
            return;
        }
        for m in [&mut *self.a, &mut *self.u] {
            for c in 0..m.cols {
                let d = q * &m[(j, c)];
                m[(i, c)] -= d;
            }
        }
    }

    /// (row_i, row_j) ← (s·row_i + t·row_j, x·row_i + y·row_j) with sy − tx = 1.
    fn combine(&mut self, i: usize, j: usize, [s, t, x, y]: [&BigInt; 4]) {
        for m in [&mut *self.a, &mut *self.u] {
            for c in 0..m.cols {
                let ri = m[(i, c)].clone();
                let rj = m[(j, c)].clone();
                m[(i, c)] = s * &ri + t * &rj;
                m[(j, c)] = x * &ri + y * &rj;
            }
        }
    }
}

/// Row-style Hermite normal form `H = U·M`.
///
/// Pivots are positive, entries above each pivot lie in `[0, pivot)`, zero rows
/// sit at the bottom, and `U` is unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut ops = Rows { a: &mut a, u: &mut u };
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        for i in r + 1..m.rows {
            if ops.a[(i, c)].is_zero() {
                continue;
            }
            if ops.a[(r, c)].is_zero() {
                ops.swap(r, i);
                continue;
            }
            let p = ops.a[(r, c)].clone();
            let q = ops.a[(i, c)].clone();
            let e = p.extended_gcd(&q);
            let (x, y) = (-(&q / &e.gcd), &p / &e.gcd);
            ops.combine(r, i, [&e.x, &e.y, &x, &y]);
        }
        if ops.a[(r, c)].is_zero() {
            continue;
        }
        if ops.a[(r, c)].is_negative() {
            ops.negate(r);
        }
        let pivot = ops.a[(r, c)].clone();
        for i in 0..r {
            let q = ops.a[(i, c)].div_floor(&pivot);
            ops.axpy(i, &q, r);
        }
        r += 1;
    }
    (a, u)
}

/// Smith normal form `D = U·M·V` with `d₁ | d₂ | …`, nonnegative diagonal.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = a[(i, t)].div_floor(&a[(t, t)]);
            row_axpy(&mut a, &mut u, i, &q, t);
            if !a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_floor(&a[(t, t)]);
            col_axpy(&mut a, &mut v, j, &q, t);
            if !a[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into row t and redo the pivot
        let pivot = a[(t, t)].clone();
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
        if let Some(i) = offending {
            row_axpy(&mut a, &mut u, t, &BigInt::from(-1), i);
            continue;
        }
        if a[(t, t)].is_negative() {
            for c in 0..cols {
                a[(t, c)] = -&a[(t, c)];
            }
            for c in 0..rows {
                u[(t, c)] = -&u[(t, c)];
            }
        }
        t += 1;
    }
    (a, u, v)
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i != j {
        Rows { a, u }.swap(i, j);
    }
}

fn row_axpy(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, q: &BigInt, j: usize) {
    Rows { a, u }.axpy(i, q, j);
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for m in [a, v] {
        for r in 0..m.rows {
            m.entries.swap(r * m.cols + i, r * m.cols + j);
        }
    }
}

/// col_i -= q · col_j
fn col_axpy(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, q: &BigInt, j: usize) {
    if q.is_zero() {
        return;
    }
    for m in [a, v] {
        for r in 0..m.rows {
            let d = q * &m[(r, j)];
            m[(r, i)] -= d;
        }
    }
}

/// Diagonal of a Smith form (length `min(rows, cols)`).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = snf(m);
    (0..d.rows.min(d.cols)).map(|i| d[(i, i)].clone()).collect()
}

/// Canonical basis (as columns) of the lattice spanned by the columns of `gens`:
/// the nonzero rows of the row HNF of `gensᵀ`.
pub fn column_lattice_basis(gens: &IntMatrix) -> IntMatrix {
    hnf(&gens.transpose()).0.nonzero_rows().transpose()
}

/// ℤ-basis (columns) of `{v ∈ ℤⁿ : M·v = 0}`, in canonical HNF form.
///
/// Taken from the transform rows that annihilate `Mᵀ`; a unimodular transform
/// makes the basis saturated.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let rank = h.nonzero_row_count();
    let kernel_rows = u.select_rows(rank..u.rows);
    if kernel_rows.rows == 0 {
        return IntMatrix::zeros(m.cols, 0);
    }
    hnf(&kernel_rows).0.nonzero_rows().transpose()
}

/// Intersection of the column lattices of `a` and `b` (both in ℤⁿ).
pub fn lattice_intersect(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows, b.rows, "lattices live in different ambient ranks");
    let neg_b = b.map(|v| -v);
    let k = integer_kernel(&a.hstack(&neg_b));
    let coeffs = IntMatrix::from_fn(a.cols, k.cols, |i, j| k[(i, j)].clone());
    let gens = a * &coeffs;
    if gens.cols == 0 {
        return IntMatrix::zeros(a.rows, 0);
    }
    column_lattice_basis(&gens)
}

/// Whether `v` lies in the column lattice of `basis`.
pub fn lattice_contains(basis: &IntMatrix, v: &[BigInt]) -> bool {
    let col = IntMatrix::from_column_vecs(v.len(), &[v.to_vec()]);
    let before = column_lattice_basis(basis);
    let after = column_lattice_basis(&basis.hstack(&col));
    before == after
}
