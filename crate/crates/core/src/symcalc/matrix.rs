//! Matrix-valued polynomials, dense in matrix indices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Scalar;
use crate::symcalc::PolySymbol;

/// Index of the entry variable `y_{ij}` when the `n²` entries of an `n×n`
/// matrix are the polynomial variables.
pub fn entry_var(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Elementary matrix `E_{ij}` with `[E_{ij}]_{ab} = δ_{ia} δ_{jb}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixUnit {
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

impl MatrixUnit {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::ShapeMismatch(format!("E_({i},{j}) outside {n}x{n}")));
        }
        Ok(Self { i, j, n })
    }

    pub fn to_matrix<S: Scalar>(&self) -> CMatrix<S> {
        CMatrix::from_fn(self.n, |a, b| {
            if a == self.i && b == self.j {
                Complex::new(S::one(), S::zero())
            } else {
                Complex::new(S::zero(), S::zero())
            }
        })
    }

    pub fn to_poly<S: Scalar>(&self, nvars: usize) -> MatrixPoly<S> {
        MatrixPoly::from_fn(self.n, nvars, |a, b| {
            if a == self.i && b == self.j {
                PolySymbol::one(nvars)
            } else {
                PolySymbol::zero(nvars)
            }
        })
    }
}

/// `n×n` matrix whose entries are [`PolySymbol`]s in a common variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly<S: Scalar> {
    n: usize,
    nvars: usize,
    entries: Vec<PolySymbol<S>>,
}

impl<S: Scalar> MatrixPoly<S> {
    pub fn zeros(n: usize, nvars: usize) -> Self {
        Self {
            n,
            nvars,
            entries: vec![PolySymbol::zero(nvars); n * n],
        }
    }

    pub fn from_fn(n: usize, nvars: usize, mut f: impl FnMut(usize, usize) -> PolySymbol<S>) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let p = f(a, b);
                assert_eq!(p.nvars(), nvars, "entry has wrong variable count");
                entries.push(p);
            }
        }
        Self { n, nvars, entries }
    }

    /// `p · I`.
    pub fn scalar(n: usize, p: &PolySymbol<S>) -> Self {
        Self::from_fn(n, p.nvars(), |a, b| if a == b { p.clone() } else { PolySymbol::zero(p.nvars()) })
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::scalar(n, &PolySymbol::one(nvars))
    }

    /// Constant polynomial matrix.
    pub fn constant(m: &CMatrix<S>, nvars: usize) -> Self {
        Self::from_fn(m.n(), nvars, |a, b| PolySymbol::constant(nvars, m.get(a, b).clone()))
    }

    /// The coordinate matrix `Y` with entries `y_{ij}` (`n²` variables).
    pub fn coordinate(n: usize) -> Self {
        let nv = n * n;
        Self::from_fn(n, nv, |a, b| PolySymbol::var(nv, entry_var(n, a, b)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, a: usize, b: usize) -> &PolySymbol<S> {
        &self.entries[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, p: PolySymbol<S>) {
        assert_eq!(p.nvars(), self.nvars, "entry has wrong variable count");
        self.entries[a * self.n + b] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PolySymbol::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().map(PolySymbol::degree).max().unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&PolySymbol<S>) -> PolySymbol<S>) -> Self {
        Self::from_fn(self.n, self.nvars, |a, b| f(self.get(a, b)))
    }

    fn try_map(&self, f: impl Fn(&PolySymbol<S>) -> Result<PolySymbol<S>>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: self.n,
            nvars: self.nvars,
            entries,
        })
    }

    /// Pointwise adjoint `φ(Y)*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, self.nvars, |a, b| self.get(b, a).conj())
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Left multiplication by a polynomial scalar.
    pub fn scale_poly(&self, p: &PolySymbol<S>) -> Self {
        self.map(|q| p * q)
    }

    pub fn trace(&self) -> PolySymbol<S> {
        (0..self.n).fold(PolySymbol::zero(self.nvars), |acc, a| &acc + self.get(a, a))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n, self.nvars), |acc, _| &acc * self)
    }

    pub fn wirtinger(&self, var: usize, conjugate: bool) -> Result<Self> {
        self.try_map(|p| p.wirtinger(var, conjugate))
    }

    pub fn laplacian(&self, vars: &[usize], power: u32) -> Result<Self> {
        self.try_map(|p| p.laplacian(vars, power))
    }

    pub fn laplacian_all(&self, power: u32) -> Self {
        self.map(|p| p.laplacian_all(power))
    }

    pub fn eval(&self, point: &[Complex<S>]) -> CMatrix<S> {
        CMatrix::from_fn(self.n, |a, b| self.get(a, b).eval(point))
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> CMatrix<f64> {
        CMatrix::from_fn(self.n, |a, b| self.get(a, b).eval_c64(point))
    }

    /// Value at the origin.
    pub fn at_zero(&self) -> CMatrix<S> {
        CMatrix::from_fn(self.n, |a, b| self.get(a, b).constant_term())
    }

    pub fn embed(&self, new_nvars: usize, map: &[usize]) -> Self {
        Self::from_fn(self.n, new_nvars, |a, b| self.get(a, b).embed(new_nvars, map))
    }

    pub fn to_f64(&self) -> MatrixPoly<f64> {
        MatrixPoly::from_fn(self.n, self.nvars, |a, b| self.get(a, b).to_f64())
    }

    pub fn close_to(&self, other: &Self) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(p, q)| p.close_to(q))
    }

    fn check_shape(&self, other: &Self) {
        assert!(self.n == other.n && self.nvars == other.nvars, "matrix polynomial shape mismatch");
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)));
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &MatrixPoly<S> {
    type Output = MatrixPoly<S>;
    fn add(self, rhs: &MatrixPoly<S>) -> MatrixPoly<S> {
        self.check_shape(rhs);
        MatrixPoly::from_fn(self.n, self.nvars, |a, b| self.get(a, b) + rhs.get(a, b))
    }
}

impl<S: Scalar> Sub for &MatrixPoly<S> {
    type Output = MatrixPoly<S>;
    fn sub(self, rhs: &MatrixPoly<S>) -> MatrixPoly<S> {
        self.check_shape(rhs);
        MatrixPoly::from_fn(self.n, self.nvars, |a, b| self.get(a, b) - rhs.get(a, b))
    }
}

impl<S: Scalar> Mul for &MatrixPoly<S> {
    type Output = MatrixPoly<S>;
    fn mul(self, rhs: &MatrixPoly<S>) -> MatrixPoly<S> {
        self.check_shape(rhs);
        MatrixPoly::from_fn(self.n, self.nvars, |a, b| {
            (0..self.n).fold(PolySymbol::zero(self.nvars), |acc, c| &acc + &(self.get(a, c) * rhs.get(c, b)))
        })
    }
}

impl<S: Scalar> Neg for &MatrixPoly<S> {
    type Output = MatrixPoly<S>;
    fn neg(self) -> MatrixPoly<S> {
        self.map(|p| -p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c_int;
    use num_rational::BigRational;

    type M = MatrixPoly<BigRational>;

    #[test]
    fn coordinate_adjoint_has_conjugate_entries() {
        let y = M::coordinate(2);
        let ys = y.adjoint();
        assert_eq!(ys.get(0, 1), &PolySymbol::conj_var(4, entry_var(2, 1, 0)));
    }

    #[test]
    fn laplacian_of_y_star_y_is_n_identity() {
        for n in 1..=3 {
            let y = M::coordinate(n);
            let lap = (&y.adjoint() * &y).laplacian_all(1);
            assert_eq!(lap, M::identity(n, n * n).scale(&c_int(n as i64)));
        }
    }

    #[test]
    fn matrix_unit_product_rule() {
        let e01 = MatrixUnit::new(0, 1, 2).unwrap().to_matrix::<BigRational>();
        let e10 = MatrixUnit::new(1, 0, 2).unwrap().to_matrix::<BigRational>();
        assert_eq!(&e01 * &e10, MatrixUnit::new(0, 0, 2).unwrap().to_matrix());
        assert!((&e01 * &e01).is_zero());
        assert!(MatrixUnit::new(2, 0, 2).is_err());
    }
}
