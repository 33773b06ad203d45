//! Sparse polynomials in complex variables and their conjugates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{close, cpow, is_zero_c, to_c64, Scalar};

/// Exponents `(α, β)` of `z^α z̄^β`, stored as `[α_0.., β_0..]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; 2 * nvars])
    }

    pub fn new(hol: &[u32], anti: &[u32]) -> Self {
        assert_eq!(hol.len(), anti.len(), "holomorphic and antiholomorphic multi-indices differ in length");
        Self(hol.iter().chain(anti).copied().collect())
    }

    pub fn nvars(&self) -> usize {
        self.0.len() / 2
    }

    pub fn hol(&self) -> &[u32] {
        &self.0[..self.nvars()]
    }

    pub fn anti(&self) -> &[u32] {
        &self.0[self.nvars()..]
    }

    pub fn hol_exp(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn anti_exp(&self, var: usize) -> u32 {
        self.0[self.nvars() + var]
    }

    pub fn hol_degree(&self) -> u32 {
        self.hol().iter().sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.anti().iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn slot(&self, var: usize, conjugate: bool) -> usize {
        if conjugate {
            self.nvars() + var
        } else {
            var
        }
    }

    pub fn exp(&self, var: usize, conjugate: bool) -> u32 {
        self.0[self.slot(var, conjugate)]
    }

    fn with_exp(&self, var: usize, conjugate: bool, e: u32) -> Self {
        let mut m = self.clone();
        let s = m.slot(var, conjugate);
        m.0[s] = e;
        m
    }

    fn times(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn conj(&self) -> Self {
        Self::new(self.anti(), self.hol())
    }
}

/// Polynomial in `z_0..z_{n-1}` and `z̄_0..z̄_{n-1}` with complex coefficients.
///
/// No zero coefficient is ever stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySymbol<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, Complex<S>>,
}

impl<S: Scalar> PolySymbol<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex<S>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex::one())
    }

    /// The coordinate `z_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        Self::constant(nvars, Complex::one()).mul_monomial(&Monomial::one(nvars).with_exp(var, false, 1))
    }

    /// The conjugate coordinate `z̄_var`.
    pub fn conj_var(nvars: usize, var: usize) -> Self {
        Self::var(nvars, var).conj()
    }

    pub fn monomial(hol: &[u32], anti: &[u32], coeff: Complex<S>) -> Self {
        let m = Monomial::new(hol, anti);
        let mut p = Self::zero(m.nvars());
        p.add_term(m, coeff);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Complex<S>)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c · m`, dropping the term if the result cancels.
    pub fn add_term(&mut self, m: Monomial, c: Complex<S>) {
        if is_zero_c(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if is_zero_c(existing) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex<S>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex<S> {
        self.terms.get(m).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn constant_term(&self) -> Complex<S> {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.hol_exp(var) + m.anti_exp(var)).max().unwrap_or(0)
    }

    /// True when every term has equal holomorphic and antiholomorphic degree.
    pub fn is_phase_balanced(&self) -> bool {
        self.terms.keys().all(|m| m.hol_degree() == m.anti_degree())
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.anti_degree() == 0)
    }

    fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.times(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        if is_zero_c(c) {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn scale_real(&self, s: S) -> Self {
        self.scale(&Complex::new(s, S::zero()))
    }

    /// Complex conjugate: swaps `α ↔ β` and conjugates coefficients.
    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.conj(), v.conj())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        Ok(())
    }

    /// Formal `∂/∂z_var` (or `∂/∂z̄_var` when `conjugate`).
    pub fn wirtinger(&self, var: usize, conjugate: bool) -> Result<Self> {
        self.check_var(var)?;
        Ok(self.wirtinger_unchecked(var, conjugate))
    }

    fn wirtinger_unchecked(&self, var: usize, conjugate: bool) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(var, conjugate);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_exp(var, conjugate, e - 1), c.clone() * Complex::new(S::from_int(e as i64), S::zero()));
        }
        out
    }

    /// `∂^k` applied `k` times.
    pub fn wirtinger_pow(&self, var: usize, conjugate: bool, k: u32) -> Result<Self> {
        self.check_var(var)?;
        Ok((0..k).fold(self.clone(), |p, _| p.wirtinger_unchecked(var, conjugate)))
    }

    /// `∂²/∂z_a ∂z̄_b`.
    pub fn mixed(&self, hol_var: usize, anti_var: usize) -> Result<Self> {
        self.check_var(hol_var)?;
        self.check_var(anti_var)?;
        Ok(self.wirtinger_unchecked(hol_var, false).wirtinger_unchecked(anti_var, true))
    }

    /// Applies `Σ w · ∂²/∂z_a ∂z̄_b` over the listed `(a, b, w)`.
    pub fn apply_second_order(&self, op: &[(usize, usize, Complex<S>)]) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        for (a, b, w) in op {
            out = &out + &self.mixed(*a, *b)?.scale(w);
        }
        Ok(out)
    }

    /// `Δ^power` with `Δ = Σ_{j ∈ vars} ∂²/∂z_j∂z̄_j`.
    pub fn laplacian(&self, vars: &[usize], power: u32) -> Result<Self> {
        for &v in vars {
            self.check_var(v)?;
        }
        let mut p = self.clone();
        for _ in 0..power {
            if p.is_zero() {
                break;
            }
            let mut next = Self::zero(self.nvars);
            for &v in vars {
                next = &next + &p.wirtinger_unchecked(v, false).wirtinger_unchecked(v, true);
            }
            p = next;
        }
        Ok(p)
    }

    /// Laplacian over all variables.
    pub fn laplacian_all(&self, power: u32) -> Self {
        let vars: Vec<usize> = (0..self.nvars).collect();
        self.laplacian(&vars, power).expect("all variables are in range")
    }

    /// Value at `z` (conjugates taken internally).
    pub fn eval(&self, point: &[Complex<S>]) -> Complex<S> {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let conj: Vec<Complex<S>> = point.iter().map(|z| z.conj()).collect();
        let mut acc = Complex::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..self.nvars {
                let (a, b) = (m.hol_exp(v), m.anti_exp(v));
                if a > 0 {
                    t = t * cpow(&point[v], a);
                }
                if b > 0 {
                    t = t * cpow(&conj[v], b);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Floating-point evaluation regardless of the coefficient field.
    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut t = to_c64(c);
            for (v, z) in point.iter().enumerate() {
                let (a, b) = (m.hol_exp(v), m.anti_exp(v));
                if a > 0 {
                    t *= z.powu(a);
                }
                if b > 0 {
                    t *= z.conj().powu(b);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sets the listed variables to zero, keeping the variable count.
    pub fn substitute_zero(&self, vars: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().all(|&v| m.hol_exp(v) == 0 && m.anti_exp(v) == 0))
            .map(|(m, c)| (m.clone(), c.clone()));
        Self {
            nvars: self.nvars,
            terms: terms.collect(),
        }
    }

    /// Sets every variable outside `keep` to zero and renumbers `keep[i] → i`.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        for &v in keep {
            self.check_var(v)?;
        }
        let mut out = Self::zero(keep.len());
        'terms: for (m, c) in &self.terms {
            for v in 0..self.nvars {
                if !keep.contains(&v) && (m.hol_exp(v) > 0 || m.anti_exp(v) > 0) {
                    continue 'terms;
                }
            }
            let hol: Vec<u32> = keep.iter().map(|&v| m.hol_exp(v)).collect();
            let anti: Vec<u32> = keep.iter().map(|&v| m.anti_exp(v)).collect();
            out.add_term(Monomial::new(&hol, &anti), c.clone());
        }
        Ok(out)
    }

    /// Re-indexes into `new_nvars` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "embedding map has wrong length");
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut hol = vec![0; new_nvars];
            let mut anti = vec![0; new_nvars];
            for (i, &target) in map.iter().enumerate() {
                assert!(target < new_nvars, "embedding target out of range");
                hol[target] += m.hol_exp(i);
                anti[target] += m.anti_exp(i);
            }
            out.add_term(Monomial::new(&hol, &anti), c.clone());
        }
        out
    }

    /// Variable permutation `z_i → z_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.embed(self.nvars, perm)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PolySymbol<T> {
        let mut out = PolySymbol::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Complex::new(f(&c.re), f(&c.im)));
        }
        out
    }

    pub fn to_f64(&self) -> PolySymbol<f64> {
        self.map_scalar(|x| x.to_f64())
    }

    /// Coefficientwise equality in the field (exact or relative tolerance).
    pub fn close_to(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let keys: std::collections::BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| close(&self.coeff(m), &other.coeff(m)))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| to_c64(c).norm()).fold(0.0, f64::max)
    }
}

fn combine<S: Scalar>(a: &PolySymbol<S>, b: &PolySymbol<S>, sign: bool) -> PolySymbol<S> {
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), if sign { c.clone() } else { -c.clone() });
    }
    out
}

impl<S: Scalar> Add for &PolySymbol<S> {
    type Output = PolySymbol<S>;
    fn add(self, rhs: &PolySymbol<S>) -> PolySymbol<S> {
        combine(self, rhs, true)
    }
}

impl<S: Scalar> Sub for &PolySymbol<S> {
    type Output = PolySymbol<S>;
    fn sub(self, rhs: &PolySymbol<S>) -> PolySymbol<S> {
        combine(self, rhs, false)
    }
}

impl<S: Scalar> Mul for &PolySymbol<S> {
    type Output = PolySymbol<S>;
    fn mul(self, rhs: &PolySymbol<S>) -> PolySymbol<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = PolySymbol::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &PolySymbol<S> {
    type Output = PolySymbol<S>;
    fn neg(self) -> PolySymbol<S> {
        self.scale(&-Complex::<S>::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for PolySymbol<S> {
            type Output = PolySymbol<S>;
            fn $m(self, rhs: PolySymbol<S>) -> PolySymbol<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_coeff<S: Scalar>(c: &Complex<S>) -> String {
    if c.im.is_zero() {
        format!("{}", c.re)
    } else {
        format!("({} + {}i)", c.re, c.im)
    }
}

impl<S: Scalar> fmt::Display for PolySymbol<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_coeff(c))?;
            for v in 0..self.nvars {
                match m.hol_exp(v) {
                    0 => {}
                    1 => write!(f, "·z{v}")?,
                    e => write!(f, "·z{v}^{e}")?,
                }
                match m.anti_exp(v) {
                    0 => {}
                    1 => write!(f, "·z̄{v}")?,
                    e => write!(f, "·z̄{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use num_rational::BigRational;

    type P = PolySymbol<BigRational>;

    fn z() -> P {
        P::var(1, 0)
    }
    fn zb() -> P {
        P::conj_var(1, 0)
    }

    #[test]
    fn wirtinger_examples() {
        // ∂(z z̄) = z̄
        assert_eq!((&z() * &zb()).wirtinger(0, false).unwrap(), zb());
        // ∂̄(z²) = 0
        assert!(z().pow(2).wirtinger(0, true).unwrap().is_zero());
        // ∂(z² z̄) = 2 z z̄
        let lhs = (&z().pow(2) * &zb()).wirtinger(0, false).unwrap();
        assert_eq!(lhs, (&z() * &zb()).scale(&cr(2, 1)));
    }

    #[test]
    fn wirtinger_rejects_bad_index() {
        assert_eq!(z().wirtinger(1, false), Err(Error::VariableOutOfRange { index: 1, nvars: 1 }));
        assert!(z().laplacian(&[3], 1).is_err());
    }

    #[test]
    fn laplacian_of_modulus_squared_is_one() {
        assert_eq!((&z() * &zb()).laplacian(&[0], 1).unwrap(), P::one(1));
        assert_eq!((&z() * &zb()).laplacian(&[0], 2).unwrap(), P::zero(1));
        assert_eq!((&z() * &zb()).laplacian(&[0], 0).unwrap(), &z() * &zb());
    }

    #[test]
    fn laplacian_of_product_of_moduli() {
        // Δ^N |d_1…d_N|² = N! over all N variables
        for n in 1..=4usize {
            let f = (0..n).fold(P::one(n), |acc, v| &(&acc * &P::var(n, v)) * &P::conj_var(n, v));
            let expect = crate::scalar::factorial::<BigRational>(n as u32);
            assert_eq!(f.laplacian_all(n as u32), P::constant(n, Complex::new(expect, BigRational::zero())));
        }
    }

    #[test]
    fn restriction_and_embedding() {
        let p = &(&P::var(3, 0) * &P::conj_var(3, 2)) + &P::var(3, 1);
        let r = p.restrict(&[0, 1]).unwrap();
        assert_eq!(r, P::var(2, 1));
        let e = P::var(2, 1).embed(4, &[2, 3]);
        assert_eq!(e, P::var(4, 3));
        assert_eq!(p.substitute_zero(&[1]), &P::var(3, 0) * &P::conj_var(3, 2));
    }

    #[test]
    fn eval_matches_float_eval() {
        let p = &(&z().pow(2) * &zb()).scale(&Complex::new(BigRational::from_int(3), BigRational::from_int(-1))) + &P::one(1);
        let x = Complex::new(BigRational::from_ratio(1, 2), BigRational::from_ratio(-2, 3));
        let exact = to_c64(&p.eval(&[x.clone()]));
        let float = p.eval_c64(&[to_c64(&x)]);
        assert!((exact - float).norm() < 1e-14);
    }

    #[test]
    fn conj_is_an_involution() {
        let p = &(&z().pow(3) * &zb()).scale(&Complex::new(BigRational::from_int(2), BigRational::from_int(5))) + &zb();
        assert_eq!(p.conj().conj(), p);
        assert_ne!(p.conj(), p);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&z() * &zb()).scale(&cr(3, 2)) + &P::one(1);
        assert_eq!(p.to_string(), "1 + 3/2·z0·z̄0");
    }
}
