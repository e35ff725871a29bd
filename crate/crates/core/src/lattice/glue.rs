//! Glue subgroups `Λ/(Λ₊⊕Λ₋) ⊆ 𝔽₂^{2g}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::kernel::IntMatrix;

use super::LatticeError;

/// Reduced row echelon basis over 𝔽₂; zero rows dropped.
pub(crate) fn f2_rref(vectors: &[Vec<bool>], width: usize) -> Vec<Vec<bool>> {
    let mut rows: Vec<Vec<bool>> = vectors.to_vec();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] {
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub(crate) fn f2_rank(vectors: &[Vec<bool>], width: usize) -> usize {
    f2_rref(vectors, width).len()
}

/// A subgroup of `𝔽₂^{2g}` stored as its reduced echelon basis.
///
/// Bits `0..g` are the Λ₊ block ("x"), bits `g..2g` the Λ₋ block ("y"); the
/// vector `(a|b)` stands for the lattice point `½(a + √−1·F·b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlueGroup {
    g: usize,
    basis: Vec<Vec<bool>>,
}

impl GlueGroup {
    pub fn trivial(g: usize) -> Self {
        GlueGroup { g, basis: Vec::new() }
    }

    /// Subgroup generated by `generators`, each of length `2g`.
    pub fn new(g: usize, generators: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        if let Some(bad) = generators.iter().find(|v| v.len() != 2 * g) {
            return Err(LatticeError::Shape(format!(
                "glue vector of length {} in genus {g} (expected {})",
                bad.len(),
                2 * g
            )));
        }
        Ok(GlueGroup { g, basis: f2_rref(&generators, 2 * g) })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<bool>] {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    fn block_rank(&self, range: std::ops::Range<usize>) -> usize {
        let projected: Vec<Vec<bool>> = self.basis.iter().map(|v| v[range.clone()].to_vec()).collect();
        f2_rank(&projected, range.len())
    }

    /// Some nonzero element has zero y-bits, i.e. lies in the x-block.
    pub fn meets_x_block(&self) -> bool {
        self.block_rank(self.g..2 * self.g) < self.dim()
    }

    /// Some nonzero element has zero x-bits.
    pub fn meets_y_block(&self) -> bool {
        self.block_rank(0..self.g) < self.dim()
    }

    pub fn contains(&self, v: &[bool]) -> bool {
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        f2_rank(&all, 2 * self.g) == self.dim()
    }

    /// Every element, in the order of binary counting over the basis.
    pub fn elements(&self) -> Vec<Vec<bool>> {
        (0u64..1 << self.dim())
            .map(|mask| {
                let mut v = vec![false; 2 * self.g];
                for (k, b) in self.basis.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        for (x, y) in v.iter_mut().zip(b) {
                            *x ^= *y;
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Image under `(a|b) ↦ (X·a | Y·b) mod 2`.
    pub fn map_blocks(&self, x_map: &IntMatrix, y_map: &IntMatrix) -> GlueGroup {
        let g = self.g;
        let apply = |m: &IntMatrix, bits: &[bool]| -> Vec<bool> {
            (0..g)
                .map(|i| {
                    let s = (0..g).filter(|&j| bits[j]).fold(BigInt::from(0), |acc, j| acc + &m[(i, j)]);
                    s.is_odd()
                })
                .collect()
        };
        let images = self
            .basis
            .iter()
            .map(|v| {
                let mut out = apply(x_map, &v[..g]);
                out.extend(apply(y_map, &v[g..]));
                out
            })
            .collect::<Vec<_>>();
        GlueGroup { g, basis: f2_rref(&images, 2 * g) }
    }

    /// Glue vectors as 0/1 integer rows.
    pub fn as_int_rows(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(|&b| BigInt::from(b as u8)).collect())
            .collect();
        IntMatrix::from_row_vecs(2 * self.g, &rows)
    }
}

pub(crate) fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for GlueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("{}|{}", bits_to_string(&v[..self.g]), bits_to_string(&v[self.g..])))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
