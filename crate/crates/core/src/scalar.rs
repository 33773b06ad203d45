//! Scalar fields the symbolic layers are generic over.
//!
//! Every symbolic object in this crate carries complex coefficients
//! `Complex<S>` where `S` is a real field. Exact rationals give bit-exact
//! identities; `f64` (and `f32`) give the floating-point path used when an
//! experiment injects measured or irrational data.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive};

/// Real scalar field underlying complex coefficients.
pub trait Scalar: Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn from_bigint(n: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Relative tolerance used by [`close`]; zero for exact fields.
    fn tolerance() -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> f64 {
        1e-12
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn tolerance() -> f64 {
        1e-5
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator beyond f64 range individually
            let shift = self.numer().bits().max(self.denom().bits()) as i64 - 900;
            if shift <= 0 {
                return f64::NAN;
            }
            let n = (self.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn tolerance() -> f64 {
        0.0
    }
}

/// Complex number from real and imaginary parts.
pub fn cx<S: Scalar>(re: S, im: S) -> Complex<S> {
    Complex::new(re, im)
}

/// Complex number from a rational real part.
pub fn cr<S: Scalar>(num: i64, den: i64) -> Complex<S> {
    Complex::new(S::from_ratio(num, den), S::zero())
}

pub fn c_int<S: Scalar>(n: i64) -> Complex<S> {
    cr(n, 1)
}

/// The imaginary unit.
pub fn c_i<S: Scalar>() -> Complex<S> {
    Complex::new(S::zero(), S::one())
}

pub fn to_c64<S: Scalar>(z: &Complex<S>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn abs_f64<S: Scalar>(z: &Complex<S>) -> f64 {
    to_c64(z).norm()
}

/// `n!` in the field `S`.
pub fn factorial<S: Scalar>(n: u32) -> S {
    (1..=n as i64).fold(S::one(), |acc, k| acc * S::from_int(k))
}

/// Exact `n!` as a big integer.
pub fn factorial_big(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial<S: Scalar>(n: u32, k: u32) -> S {
    if k > n {
        return S::zero();
    }
    let mut acc = S::one();
    for j in 0..k as i64 {
        acc = acc * S::from_ratio(n as i64 - j, j + 1);
    }
    acc
}

/// Equality in the field: exact for rationals, relative tolerance for floats.
pub fn close<S: Scalar>(a: &Complex<S>, b: &Complex<S>) -> bool {
    if S::EXACT {
        return a == b;
    }
    let (a, b) = (to_c64(a), to_c64(b));
    let scale = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() <= S::tolerance() * scale
}

/// Converts a finite `f64` to an exact rational (exact binary expansion).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Non-negative integer power.
pub fn cpow<S: Scalar>(z: &Complex<S>, k: u32) -> Complex<S> {
    let mut acc = Complex::new(S::one(), S::zero());
    for _ in 0..k {
        acc = acc * z.clone();
    }
    acc
}

pub fn is_zero_c<S: Scalar>(z: &Complex<S>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}
