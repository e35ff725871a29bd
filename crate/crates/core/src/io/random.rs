//! Seeded random lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{ExactMatrix, ExactScalar, Field, IntMatrix};
use crate::lattice::{f2_rank, GlueGroup, RealLattice};

use super::LatticeDocument;

pub const MAX_RANDOM_GENUS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RandomError {
    #[error("random generation supports 1 <= g <= {MAX_RANDOM_GENUS}, got {0}")]
    Genus(usize),
}

fn random_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(rng.gen_range(1i64..=3)))
}

fn random_period(g: usize, field: Field, rng: &mut impl Rng) -> ExactMatrix {
    loop {
        let entries = (0..g * g)
            .map(|_| {
                let r = random_rational(rng);
                let s = match field {
                    Field::Quadratic(_) if rng.gen_bool(0.5) => random_rational(rng),
                    _ => BigRational::from_integer(0.into()),
                };
                ExactScalar::new(field, r, s).expect("surd part only in quadratic fields")
            })
            .collect();
        let m = ExactMatrix::new(field, g, g, entries).expect("shape");
        if !m.determinant().expect("square").is_zero() {
            return m;
        }
    }
}

/// Number of `k`-dimensional subspaces of `𝔽₂^n`.
fn gaussian_binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((1u64 << (n - i)) - 1) as f64 / ((1u64 << (i + 1)) - 1) as f64).product()
}

/// Uniform among the subgroups of `𝔽₂^{2g}` meeting neither coordinate block.
fn random_glue(g: usize, rng: &mut impl Rng) -> GlueGroup {
    let n = 2 * g;
    let weights: Vec<f64> = (0..=g).map(|k| gaussian_binomial(n, k)).collect();
    let total: f64 = weights.iter().sum();
    loop {
        let mut pick = rng.gen_range(0.0..total);
        let k = weights
            .iter()
            .position(|w| {
                pick -= w;
                pick < 0.0
            })
            .unwrap_or(g);
        let vectors = loop {
            let vs: Vec<Vec<bool>> = (0..k).map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect()).collect();
            if f2_rank(&vs, n) == k {
                break vs;
            }
        };
        let glue = GlueGroup::new(g, vectors).expect("lengths match");
        if !glue.meets_x_block() && !glue.meets_y_block() {
            return glue;
        }
    }
}

pub fn random_lattice(g: usize, field: Field, rng: &mut impl Rng) -> RealLattice {
    let period = random_period(g, field, rng);
    RealLattice::new(field, period, random_glue(g, rng)).expect("sampled lattices are valid")
}

/// `count` valid lattice documents, determined by `seed`.
pub fn gen_random(g: usize, field: Field, seed: u64, count: usize) -> Result<Vec<LatticeDocument>, RandomError> {
    if g == 0 || g > MAX_RANDOM_GENUS {
        return Err(RandomError::Genus(g));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|i| LatticeDocument::new(format!("random-{seed}-{i}"), random_lattice(g, field, &mut rng)))
        .collect())
}

/// Product of `steps` random elementary row operations and sign flips.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    let indices: Vec<usize> = (0..n).collect();
    for _ in 0..steps {
        if n >= 2 {
            let pair: Vec<usize> = indices.choose_multiple(rng, 2).copied().collect();
            let c = BigInt::from(rng.gen_range(-2i64..=2));
            for j in 0..n {
                let add = &m[(pair[1], j)] * &c;
                m[(pair[0], j)] += add;
            }
        }
        if rng.gen_bool(0.2) {
            let i = rng.gen_range(0..n);
            for j in 0..n {
                m[(i, j)] = -m[(i, j)].clone();
            }
        }
    }
    m
}
