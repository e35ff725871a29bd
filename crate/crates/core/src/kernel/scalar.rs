//! Exact scalars in ℚ or a real quadratic field ℚ(√d).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KernelError;

/// Coefficient field of a lattice: ℚ or ℚ(√d) with `d` squarefree and at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Quadratic(u64),
}

impl Field {
    /// Builds ℚ(√d), rejecting radicands that are not squarefree or below 2.
    pub fn quadratic(d: i64) -> Result<Field, KernelError> {
        if d < 2 {
            return Err(KernelError::BadRadicand(d));
        }
        let d = d as u64;
        if !is_squarefree(d) {
            return Err(KernelError::BadRadicand(d as i64));
        }
        Ok(Field::Quadratic(d))
    }

    pub fn radicand(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Quadratic(d) => Some(d),
        }
    }

    /// Whether a scalar can live in this field.
    pub fn admits(self, x: &ExactScalar) -> bool {
        x.surd.is_zero() || x.radicand == self.radicand()
    }

    /// Smallest field holding both; `None` when the radicands differ.
    pub fn join(self, other: Field) -> Option<Field> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Some(f),
            (Field::Quadratic(a), Field::Quadratic(b)) if a == b => Some(self),
            _ => None,
        }
    }

    /// Dimension over ℚ.
    pub fn degree(self) -> usize {
        match self {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// `rational + surd·√radicand`, both parts in lowest terms.
///
/// Equality and ordering compare real values. Arithmetic between scalars of two
/// different quadratic fields (both with nonzero surd parts) is a logic error
/// and panics; matrices reject such mixtures at construction.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    rational: BigRational,
    surd: BigRational,
    radicand: Option<u64>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar { rational: r, surd: BigRational::zero(), radicand: None }
    }

    /// `a + b√d` in `field`; with `Field::Rational` the surd part must be zero.
    pub fn new(field: Field, rational: BigRational, surd: BigRational) -> Result<Self, KernelError> {
        match field {
            Field::Rational if !surd.is_zero() => Err(KernelError::SurdInRationalField),
            Field::Rational => Ok(Self::from_rational(rational)),
            Field::Quadratic(d) => Ok(Self::canonical(rational, surd, Some(d))),
        }
    }

    /// The generator √d of ℚ(√d).
    pub fn sqrt_of(field: Field) -> Option<Self> {
        field
            .radicand()
            .map(|d| Self::canonical(BigRational::zero(), BigRational::one(), Some(d)))
    }

    fn canonical(rational: BigRational, surd: BigRational, radicand: Option<u64>) -> Self {
        let radicand = if surd.is_zero() { None } else { radicand };
        ExactScalar { rational, surd, radicand }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    /// Radicand of the field this value needs; `None` for rationals.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.surd.is_zero() && self.rational.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// Rational integer (surd part zero, denominator one).
    pub fn is_integer(&self) -> bool {
        self.surd.is_zero() && self.rational.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.rational.to_integer())
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.surd);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand.unwrap_or(0)));
        let norm = &self.rational * &self.rational - d * &self.surd * &self.surd;
        sa * sign_of(&norm)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        ExactScalar { rational: self.rational.clone(), surd: -&self.surd, radicand: self.radicand }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.radicand.unwrap_or(0)));
        &self.rational * &self.rational - d * &self.surd * &self.surd
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::canonical(&self.rational / &n, -&self.surd / &n, self.radicand))
    }

    /// A dyadic rational within `2^-bits` of the value, computed with integer
    /// square roots only.
    pub fn approximate(&self, bits: u32) -> BigRational {
        if self.surd.is_zero() {
            return self.rational.clone();
        }
        let scale = BigInt::one() << bits;
        let d = BigInt::from(self.radicand.unwrap_or(0));
        let num = self.surd.numer();
        let den = self.surd.denom();
        let radicand = num * num * d * &scale * &scale;
        let root = (radicand / (den * den)).sqrt();
        let signed = if num.is_negative() { -root } else { root };
        &self.rational + BigRational::new(signed, scale)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.surd.is_zero() {
            return a;
        }
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand.unwrap_or(0) as f64).sqrt()
    }

    fn join_radicand(&self, other: &ExactScalar) -> Option<u64> {
        match (self.radicand, other.radicand) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), Some(b)) => panic!("arithmetic across Q(sqrt {a}) and Q(sqrt {b})"),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::canonical(&self.rational * r, &self.surd * r, self.radicand)
    }
}

fn sign_of(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Greatest common divisor helper reused by the integer kernel.
pub(crate) fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational
            && self.surd == other.surd
            && (self.surd.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for ExactScalar {}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rat = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
        match self.radicand {
            None => write!(f, "{}", rat(&self.rational)),
            Some(_) if self.surd.is_negative() => {
                write!(f, "{} - {} w", rat(&self.rational), rat(&-&self.surd))
            }
            Some(_) => write!(f, "{} + {} w", rat(&self.rational), rat(&self.surd)),
        }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { rational: -&self.rational, surd: -&self.surd, radicand: self.radicand }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let r = self.join_radicand(rhs);
        ExactScalar::canonical(&self.rational + &rhs.rational, &self.surd + &rhs.surd, r)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let r = self.join_radicand(rhs);
        ExactScalar::canonical(&self.rational - &rhs.rational, &self.surd - &rhs.surd, r)
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let r = self.join_radicand(rhs);
        let d = BigRational::from_integer(BigInt::from(r.unwrap_or(0)));
        let rational = &self.rational * &rhs.rational + d * &self.surd * &rhs.surd;
        let surd = &self.rational * &rhs.surd + &self.surd * &rhs.rational;
        ExactScalar::canonical(rational, surd, r)
    }
}

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
