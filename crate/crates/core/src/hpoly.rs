//! Finite series `Σ_k c_k h^k` with coefficients in a module over the field.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::linalg::CMatrix;
use crate::scalar::{close, is_zero_c, Scalar};
use crate::symcalc::{MatrixPoly, PolySymbol};

/// Coefficient types an [`HPolynomial`] can carry.
pub trait HCoeff: Clone + Debug + PartialEq {
    type Field: Scalar;
    fn zero_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_coeff(&self, other: &Self) -> Self;
    fn sub_coeff(&self, other: &Self) -> Self;
    fn scale_coeff(&self, c: &Complex<Self::Field>) -> Self;
    fn close_coeff(&self, other: &Self) -> bool;
}

/// Coefficients that can be multiplied with one another.
pub trait HMul: HCoeff {
    fn mul_coeff(&self, other: &Self) -> Self;
}

impl<S: Scalar> HCoeff for Complex<S> {
    type Field = S;
    fn zero_like(&self) -> Self {
        Complex::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        is_zero_c(self)
    }
    fn add_coeff(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub_coeff(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn scale_coeff(&self, c: &Complex<S>) -> Self {
        self.clone() * c.clone()
    }
    fn close_coeff(&self, o: &Self) -> bool {
        close(self, o)
    }
}

impl<S: Scalar> HMul for Complex<S> {
    fn mul_coeff(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
}

impl<S: Scalar> HCoeff for PolySymbol<S> {
    type Field = S;
    fn zero_like(&self) -> Self {
        PolySymbol::zero(self.nvars())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_coeff(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_coeff(&self, o: &Self) -> Self {
        self - o
    }
    fn scale_coeff(&self, c: &Complex<S>) -> Self {
        self.scale(c)
    }
    fn close_coeff(&self, o: &Self) -> bool {
        self.close_to(o)
    }
}

impl<S: Scalar> HMul for PolySymbol<S> {
    fn mul_coeff(&self, o: &Self) -> Self {
        self * o
    }
}

impl<S: Scalar> HCoeff for CMatrix<S> {
    type Field = S;
    fn zero_like(&self) -> Self {
        CMatrix::zeros(self.n())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_coeff(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_coeff(&self, o: &Self) -> Self {
        self - o
    }
    fn scale_coeff(&self, c: &Complex<S>) -> Self {
        self.scale(c)
    }
    fn close_coeff(&self, o: &Self) -> bool {
        self.close_to(o)
    }
}

impl<S: Scalar> HMul for CMatrix<S> {
    fn mul_coeff(&self, o: &Self) -> Self {
        self * o
    }
}

impl<S: Scalar> HCoeff for MatrixPoly<S> {
    type Field = S;
    fn zero_like(&self) -> Self {
        MatrixPoly::zeros(self.n(), self.nvars())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_coeff(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_coeff(&self, o: &Self) -> Self {
        self - o
    }
    fn scale_coeff(&self, c: &Complex<S>) -> Self {
        self.scale(c)
    }
    fn close_coeff(&self, o: &Self) -> bool {
        self.close_to(o)
    }
}

impl<S: Scalar> HMul for MatrixPoly<S> {
    fn mul_coeff(&self, o: &Self) -> Self {
        self * o
    }
}

/// `Σ_{k} coeffs[k] h^{low + k}`, trimmed at both ends.
///
/// `low` is negative only for Laurent series. The zero series has no
/// coefficients and `low = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolynomial<T: HCoeff> {
    low: i32,
    coeffs: Vec<T>,
    zero: T,
}

impl<T: HCoeff> HPolynomial<T> {
    pub fn zero(zero: T) -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
            zero: zero.zero_like(),
        }
    }

    /// `c · h^0`.
    pub fn constant(c: T) -> Self {
        Self::from_coeffs(c.zero_like(), vec![c])
    }

    /// `c · h^k`.
    pub fn monomial(c: T, k: i32) -> Self {
        Self::laurent(c.zero_like(), k, vec![c])
    }

    pub fn from_coeffs(zero: T, coeffs: Vec<T>) -> Self {
        Self::laurent(zero, 0, coeffs)
    }

    pub fn laurent(zero: T, low: i32, coeffs: Vec<T>) -> Self {
        let mut p = Self {
            low,
            coeffs,
            zero: zero.zero_like(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(HCoeff::is_zero_coeff) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero_coeff()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `h^k` (zero outside the support).
    pub fn coeff(&self, k: i32) -> T {
        let idx = k - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return self.zero.clone();
        }
        self.coeffs[idx as usize].clone()
    }

    /// `(exponent, coefficient)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &T)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn zero_coeff(&self) -> &T {
        &self.zero
    }

    fn span(&self, other: &Self) -> (i32, i32) {
        let lo = self.valuation().into_iter().chain(other.valuation()).min().unwrap_or(0);
        let hi = self.degree().into_iter().chain(other.degree()).max().unwrap_or(-1);
        (lo, hi)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (lo, hi) = self.span(other);
        let coeffs = (lo..=hi).map(|k| self.coeff(k).add_coeff(&other.coeff(k))).collect();
        Self::laurent(self.zero.clone(), lo, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (lo, hi) = self.span(other);
        let coeffs = (lo..=hi).map(|k| self.coeff(k).sub_coeff(&other.coeff(k))).collect();
        Self::laurent(self.zero.clone(), lo, coeffs)
    }

    pub fn scale(&self, c: &Complex<T::Field>) -> Self {
        Self::laurent(self.zero.clone(), self.low, self.coeffs.iter().map(|x| x.scale_coeff(c)).collect())
    }

    /// Multiplies by `h^k`.
    pub fn shift(&self, k: i32) -> Self {
        let mut p = self.clone();
        if !p.is_zero() {
            p.low += k;
        }
        p
    }

    /// Keeps only exponents `≤ max`.
    pub fn truncate(&self, max: i32) -> Self {
        let coeffs = self.iter().filter(|(k, _)| *k <= max).map(|(_, c)| c.clone()).collect();
        Self::laurent(self.zero.clone(), self.low, coeffs)
    }

    /// Applies `f` to every coefficient.
    pub fn map<U: HCoeff>(&self, zero: U, f: impl Fn(&T) -> U) -> HPolynomial<U> {
        HPolynomial::laurent(zero, self.low, self.coeffs.iter().map(f).collect())
    }

    /// Value at a given `h` in the field.
    pub fn eval(&self, h: &T::Field) -> T {
        let hc = Complex::new(h.clone(), T::Field::zero());
        let inv = Complex::new(T::Field::one() / h.clone(), T::Field::zero());
        let mut acc = self.zero.clone();
        for (k, c) in self.iter() {
            let base = if k < 0 { &inv } else { &hc };
            let mut p = Complex::new(T::Field::one(), T::Field::zero());
            for _ in 0..k.unsigned_abs() {
                p = p * base.clone();
            }
            acc = acc.add_coeff(&c.scale_coeff(&p));
        }
        acc
    }

    /// Coefficientwise equality in the field.
    pub fn close_to(&self, other: &Self) -> bool {
        let (lo, hi) = self.span(other);
        (lo..=hi).all(|k| self.coeff(k).close_coeff(&other.coeff(k)))
    }
}

impl<T: HMul> HPolynomial<T> {
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.zero.clone());
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add_coeff(&a.mul_coeff(b));
            }
        }
        Self::laurent(self.zero.clone(), self.low + other.low, coeffs)
    }
}

impl<S: Scalar> HPolynomial<CMatrix<S>> {
    /// Floating-point value at `h`.
    pub fn eval_f64(&self, h: f64) -> nalgebra::DMatrix<num_complex::Complex64> {
        let n = self.zero.n();
        let mut acc = nalgebra::DMatrix::zeros(n, n);
        for (k, c) in self.iter() {
            acc += c.to_c64() * num_complex::Complex64::new(h.powi(k), 0.0);
        }
        acc
    }
}
