//! Existence of polarizations.
//!
//! `E(S)` is ℚ-linear in `S`, and a form whose `E` values are rational becomes
//! integral after multiplying by a positive integer. So `L` is polarizable iff
//! the ℚ-space `W` of symmetric `S` with rational `E` values meets the
//! positive definite cone. A `No` answer is certified by a nonzero positive
//! semidefinite `Q` orthogonal to `W` under the trace pairing.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{ExactMatrix, ExactScalar, Field};
use crate::lattice::{LatticeError, RealLattice};

use super::{integrality_matrix, verify_polarization, PolarizationError, PolarizationForm};

/// Limits for the numerical search used when no closed form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { iterations: 2000, restarts: 8, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnknownReport {
    pub budget: SearchBudget,
    /// Best smallest eigenvalue reached in `W` (normalized coefficients).
    pub best_margin: f64,
    /// Best smallest eigenvalue reached in `W^⊥`.
    pub best_dual_margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolarizabilityCertificate {
    Yes(PolarizationForm),
    No(ExactMatrix),
    Unknown(UnknownReport),
}

/// The ℚ-space `W` of symmetric forms whose `E` values on Λ are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSubspace {
    g: usize,
    field: Field,
    basis: Vec<ExactMatrix>,
}

impl AdmissibleSubspace {
    pub fn basis(&self) -> &[ExactMatrix] {
        &self.basis
    }

    /// Dimension over ℚ.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

fn upper_pairs(g: usize) -> Vec<(usize, usize)> {
    (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).collect()
}

fn symmetric_unit(field: Field, g: usize, (i, j): (usize, usize), scale: &ExactScalar) -> ExactMatrix {
    ExactMatrix::from_fn(field, g, g, |a, b| {
        if (a, b) == (i, j) || (a, b) == (j, i) { scale.clone() } else { ExactScalar::zero() }
    })
}

pub fn admissible_subspace(l: &RealLattice) -> Result<AdmissibleSubspace, PolarizationError> {
    l.validate().map_err(LatticeError::Invalid)?;
    let g = l.g();
    let field = l.field();
    let mut scales = vec![ExactScalar::one()];
    if let Some(s) = ExactScalar::sqrt_of(field) {
        scales.push(s);
    }
    let units: Vec<ExactMatrix> = upper_pairs(g)
        .into_iter()
        .flat_map(|p| scales.iter().map(move |s| (p, s.clone())))
        .map(|(p, s)| symmetric_unit(field, g, p, &s))
        .collect();
    if scales.len() == 1 {
        return Ok(AdmissibleSubspace { g, field, basis: units });
    }

    let values: Vec<ExactMatrix> =
        units.iter().map(|u| integrality_matrix(l, u).map(|e| e.surd_parts())).collect::<Result<_, _>>()?;
    let rows = 4 * g * g;
    let constraints = ExactMatrix::from_fn(Field::Rational, rows, units.len(), |r, c| {
        values[c].get(r / (2 * g), r % (2 * g)).clone()
    });
    let kernel = constraints.kernel();
    let basis = (0..kernel.cols())
        .map(|k| {
            units.iter().enumerate().fold(ExactMatrix::zeros(field, g, g), |acc, (u, m)| {
                &acc + &m.scale(kernel.get(u, k))
            })
        })
        .collect();
    Ok(AdmissibleSubspace { g, field, basis })
}

/// `k·(F·Fᵀ)⁻¹` for rational `F`, with `k` the least positive integer
/// making `E` integral.
pub fn construct_default(l: &RealLattice) -> Result<Option<PolarizationForm>, PolarizationError> {
    if !l.has_rational_period() {
        return Ok(None);
    }
    let f = l.period();
    let s = (f * &f.transpose()).inverse()?;
    scale_to_integral(l, &s).map(Some)
}

fn scale_to_integral(l: &RealLattice, s: &ExactMatrix) -> Result<PolarizationForm, PolarizationError> {
    let e = integrality_matrix(l, s)?;
    if !e.is_rational() {
        return Err(PolarizationError::NonIntegral);
    }
    let k = e.common_denominator();
    let scaled = s.scale_rational(&BigRational::from_integer(k));
    debug_assert!(verify_polarization(l, &scaled).unwrap_or(false));
    PolarizationForm::new(scaled)
}

/// Re-checks a `No` certificate: `Q` symmetric, nonzero, positive
/// semidefinite and trace-orthogonal to `W`.
pub fn verify_no_certificate(l: &RealLattice, q: &ExactMatrix) -> Result<bool, PolarizationError> {
    if q.rows() != l.g() || !q.is_square() {
        return Err(PolarizationError::Shape(format!("certificate must be {0}x{0}", l.g())));
    }
    if !q.is_symmetric() || q.is_zero() || !q.is_positive_semidefinite()? {
        return Ok(false);
    }
    let q = super::in_lattice_field(l, q)?;
    let w = admissible_subspace(l)?;
    Ok(w.basis().iter().all(|b| q.frobenius_dot(b).is_zero()))
}

fn vectorize(m: &ExactMatrix) -> Vec<ExactScalar> {
    upper_pairs(m.rows()).into_iter().map(|(i, j)| m.get(i, j).clone()).collect()
}

fn devectorize(field: Field, g: usize, v: &[ExactScalar]) -> ExactMatrix {
    let pairs = upper_pairs(g);
    let mut m = ExactMatrix::zeros(field, g, g);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        m = &m + &symmetric_unit(field, g, (i, j), &v[k]);
    }
    m
}

fn quad_form(m: &ExactMatrix, v: &[ExactScalar]) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for i in 0..v.len() {
        for j in 0..v.len() {
            acc = &acc + &(&(&v[i] * m.get(i, j)) * &v[j]);
        }
    }
    acc
}

fn outer(field: Field, v: &[ExactScalar]) -> ExactMatrix {
    ExactMatrix::from_fn(field, v.len(), v.len(), |i, j| &v[i] * &v[j])
}

fn to_dmatrix(m: &ExactMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_f64())
}

fn dyadic(x: f64, bits: u32) -> BigRational {
    let scaled = (x * (1u64 << bits) as f64).round();
    BigRational::new(BigInt::from(scaled as i64), BigInt::one() << bits)
}

/// A vector with `vᵀmv` of the given sign: unit and pair vectors first, then
/// rounded eigenvectors.
fn vector_with_sign(m: &ExactMatrix, sign: i32) -> Option<Vec<ExactScalar>> {
    let n = m.rows();
    let unit = |i: usize| -> Vec<ExactScalar> { (0..n).map(|k| ExactScalar::from_int((k == i) as i64)).collect() };
    let mut candidates: Vec<Vec<ExactScalar>> = (0..n).map(unit).collect();
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = unit(i);
                v[j] = ExactScalar::from_int(s);
                candidates.push(v);
            }
        }
    }
    if let Some(v) = candidates.into_iter().find(|v| quad_form(m, v).signum() == sign) {
        return Some(v);
    }
    let eig = SymmetricEigen::new(to_dmatrix(m));
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| (a.1 * sign as f64).total_cmp(&(b.1 * sign as f64)))?;
    let vec = eig.eigenvectors.column(idx);
    (8..=52).step_by(4).find_map(|bits| {
        let v: Vec<ExactScalar> = vec.iter().map(|x| ExactScalar::from_rational(dyadic(*x, bits))).collect();
        (quad_form(m, &v).signum() == sign).then_some(v)
    })
}

struct Geometry {
    field: Field,
    g: usize,
    /// Elements of `W` that form a basis of its real span.
    span_basis: Vec<ExactMatrix>,
    /// Basis of the trace-orthogonal complement of that span.
    perp: Vec<ExactMatrix>,
}

fn geometry(w: &AdmissibleSubspace) -> Result<Geometry, PolarizationError> {
    let (field, g) = (w.field, w.g);
    let m = g * (g + 1) / 2;
    let columns: Vec<Vec<ExactScalar>> = w.basis.iter().map(vectorize).collect();
    let span_basis: Vec<ExactMatrix> = if columns.is_empty() {
        Vec::new()
    } else {
        let mat = ExactMatrix::from_columns(field, m, &columns);
        mat.rref().1.into_iter().map(|c| w.basis[c].clone()).collect()
    };
    let pairs = upper_pairs(g);
    let pairing_rows: Vec<Vec<ExactScalar>> = span_basis
        .iter()
        .map(|b| {
            pairs
                .iter()
                .map(|&(i, j)| if i == j { b.get(i, j).clone() } else { b.get(i, j) * &ExactScalar::from_int(2) })
                .collect()
        })
        .collect();
    let perp = if pairing_rows.is_empty() {
        upper_pairs(g).into_iter().map(|p| symmetric_unit(field, g, p, &ExactScalar::one())).collect()
    } else {
        let r = ExactMatrix::from_rows(field, pairing_rows)?;
        let k = r.kernel();
        (0..k.cols()).map(|c| devectorize(field, g, &k.column(c))).collect()
    };
    Ok(Geometry { field, g, span_basis, perp })
}

/// An element of `W` close enough to the positive definite `target` (which
/// must lie in the real span of `W`) to be positive definite itself.
fn approximate_in_w(geo: &Geometry, target: &ExactMatrix) -> Result<Option<ExactMatrix>, PolarizationError> {
    let m = geo.g * (geo.g + 1) / 2;
    let columns: Vec<Vec<ExactScalar>> = geo.span_basis.iter().map(vectorize).collect();
    let mat = ExactMatrix::from_columns(geo.field, m, &columns);
    let rhs = ExactMatrix::from_columns(geo.field, m, &[vectorize(target)]);
    let Some(coeffs) = mat.solve(&rhs)? else {
        return Ok(None);
    };
    for bits in [0u32, 8, 16, 32, 64, 128, 256] {
        let s = geo.span_basis.iter().enumerate().fold(ExactMatrix::zeros(geo.field, geo.g, geo.g), |acc, (i, b)| {
            let c = coeffs.get(i, 0);
            let c = if bits == 0 { c.rational_part().clone() } else { c.approximate(bits) };
            &acc + &b.scale_rational(&c)
        });
        if s.is_positive_definite()? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn min_eigen(m: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .unwrap_or((0, f64::NEG_INFINITY));
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Supergradient ascent of `λ_min(Σ cᵢAᵢ)` over the unit sphere.
fn maximize_min_eigenvalue(basis: &[ExactMatrix], budget: &SearchBudget, rng: &mut ChaCha8Rng) -> (f64, Vec<f64>) {
    let mats: Vec<DMatrix<f64>> = basis.iter().map(to_dmatrix).collect();
    let n = mats.first().map(|m| m.nrows()).unwrap_or(0);
    let combine = |c: &[f64]| mats.iter().zip(c).fold(DMatrix::zeros(n, n), |acc, (m, x)| acc + m * *x);
    let normalize = |c: &mut Vec<f64>| {
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            c.iter_mut().for_each(|x| *x /= norm);
        }
    };
    let mut best = (f64::NEG_INFINITY, vec![0.0; mats.len()]);
    for _ in 0..budget.restarts.max(1) {
        let mut c: Vec<f64> = (0..mats.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut c);
        for t in 0..budget.iterations {
            let (val, v) = min_eigen(&combine(&c));
            if val > best.0 {
                best = (val, c.clone());
            }
            let dv = nalgebra::DVector::from_vec(v);
            let step = 0.5 / ((t + 1) as f64).sqrt();
            for (ci, m) in c.iter_mut().zip(&mats) {
                *ci += step * (dv.transpose() * m * &dv)[(0, 0)];
            }
            normalize(&mut c);
        }
    }
    best
}

/// Positive definite exact combination of `basis` with rounded coefficients.
fn rationalize(basis: &[ExactMatrix], coeffs: &[f64], field: Field, g: usize) -> Result<Option<ExactMatrix>, PolarizationError> {
    for bits in [10u32, 20, 30, 40, 52] {
        let m = basis.iter().zip(coeffs).fold(ExactMatrix::zeros(field, g, g), |acc, (b, c)| {
            &acc + &b.scale_rational(&dyadic(*c, bits))
        });
        if !m.is_zero() && m.is_positive_definite()? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Decides whether `L` carries a polarization, returning an exactly checked
/// witness or certificate, or `Unknown` when the numerical search fails.
pub fn decide_polarizable(l: &RealLattice, budget: &SearchBudget) -> Result<PolarizabilityCertificate, PolarizationError> {
    if let Some(s) = construct_default(l)? {
        return Ok(PolarizabilityCertificate::Yes(s));
    }
    let w = admissible_subspace(l)?;
    let geo = geometry(&w)?;
    let (field, g) = (geo.field, geo.g);
    let m = g * (g + 1) / 2;
    let k = geo.span_basis.len();
    let id = ExactMatrix::identity(field, g);
    let yes = |s: ExactMatrix| scale_to_integral(l, &s).map(PolarizabilityCertificate::Yes);
    let no = |q: ExactMatrix| Ok(PolarizabilityCertificate::No(q));

    if k == 0 {
        return no(id);
    }
    for b in w.basis() {
        for candidate in [b.clone(), -b] {
            if candidate.is_positive_definite()? {
                return yes(candidate);
            }
        }
    }
    if k == m {
        if let Some(s) = approximate_in_w(&geo, &id)? {
            return yes(s);
        }
    } else if m - k == 1 {
        let q = &geo.perp[0];
        if q.is_positive_semidefinite()? {
            return no(q.clone());
        }
        if (-q).is_positive_semidefinite()? {
            return no(-q);
        }
        let t = q.trace();
        let target = if t.is_zero() {
            Some(id.clone())
        } else {
            vector_with_sign(q, -t.signum()).map(|b| {
                let mu = -(&t / &quad_form(q, &b));
                &id + &outer(field, &b).scale(&mu)
            })
        };
        if let Some(target) = target {
            if let Some(s) = approximate_in_w(&geo, &target)? {
                return yes(s);
            }
        }
    } else if k == 1 {
        let w0 = &geo.span_basis[0];
        if w0.is_positive_definite()? {
            return yes(w0.clone());
        }
        if (-w0).is_positive_definite()? {
            return yes(-w0);
        }
        if w0.is_positive_semidefinite()? || (-w0).is_positive_semidefinite()? {
            let kernel = w0.kernel();
            return no(outer(field, &kernel.column(0)));
        }
        if let (Some(a), Some(b)) = (vector_with_sign(w0, 1), vector_with_sign(w0, -1)) {
            let alpha = quad_form(w0, &a);
            let beta = quad_form(w0, &b);
            let t = &beta / &(&beta - &alpha);
            let one_minus = &ExactScalar::one() - &t;
            return no(&outer(field, &a).scale(&t) + &outer(field, &b).scale(&one_minus));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (margin, coeffs) = maximize_min_eigenvalue(w.basis(), budget, &mut rng);
    if margin > 1e-9 {
        if let Some(s) = rationalize(w.basis(), &coeffs, field, g)? {
            return yes(s);
        }
    }
    let (dual_margin, dual_coeffs) = maximize_min_eigenvalue(&geo.perp, budget, &mut rng);
    if dual_margin > 1e-9 {
        if let Some(q) = rationalize(&geo.perp, &dual_coeffs, field, g)? {
            return no(q);
        }
    }
    Ok(PolarizabilityCertificate::Unknown(UnknownReport {
        budget: *budget,
        best_margin: margin,
        best_dual_margin: dual_margin,
    }))
}
