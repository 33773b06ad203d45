//! Small dense complex matrices.
//!
//! [`CMatrix`] is generic over the scalar field and is used wherever an
//! identity has to hold exactly (spectral forms, exact Berezin transforms).
//! The `*_c64` helpers work on `nalgebra` matrices for the numerical path
//! (eigendecompositions, norms, QR).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{close, is_zero_c, to_c64, Scalar};

/// Square `n x n` complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<S: Scalar> {
    n: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> CMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_diag(diag: &[Complex<S>]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i].clone() } else { Complex::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<S>>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex<S> {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex<S>) {
        self.data[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[Complex<S>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.n).fold(Complex::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn diagonal(&self) -> Vec<Complex<S>> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(is_zero_c)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| to_c64(z).norm()).fold(0.0, f64::max)
    }

    /// Entrywise equality in the field (exact or relative tolerance).
    pub fn close_to(&self, other: &Self) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| close(a, b))
    }

    pub fn to_c64(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| to_c64(self.get(i, j)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CMatrix<T> {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| Complex::new(f(&z.re), f(&z.im))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| &acc * self)
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = if S::EXACT {
                (col..n).find(|&r| !is_zero_c(a.get(r, col)))?
            } else {
                let r = (col..n)
                    .max_by(|&x, &y| to_c64(a.get(x, col)).norm().total_cmp(&to_c64(a.get(y, col)).norm()))
                    .unwrap();
                if to_c64(a.get(r, col)).norm() == 0.0 {
                    return None;
                }
                r
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j).clone() / p.clone();
                a.set(col, j, v);
                let w = inv.get(col, j).clone() / p.clone();
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if is_zero_c(&factor) {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                    let w = inv.get(r, j).clone() - factor.clone() * inv.get(col, j).clone();
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    /// `max |U*U - I|` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.n)).max_abs()
    }

    /// `max |X*X - XX*|` entrywise.
    pub fn normality_residual(&self) -> f64 {
        let a = self.adjoint();
        (&(&a * self) - &(self * &a)).max_abs()
    }
}

impl<S: Scalar> Add for &CMatrix<S> {
    type Output = CMatrix<S>;
    fn add(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &CMatrix<S> {
    type Output = CMatrix<S>;
    fn sub(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &CMatrix<S> {
    type Output = CMatrix<S>;
    fn neg(self) -> CMatrix<S> {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl<S: Scalar> Mul for &CMatrix<S> {
    type Output = CMatrix<S>;
    fn mul(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone())
        })
    }
}

/// A normal matrix given by its spectral form `X = V diag(eigen) V*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralForm<S: Scalar> {
    v: CMatrix<S>,
    eigen: Vec<Complex<S>>,
}

impl<S: Scalar> SpectralForm<S> {
    /// Validates unitarity of `v` (exactly for exact fields, 1e-10 otherwise).
    pub fn new(v: CMatrix<S>, eigen: Vec<Complex<S>>) -> Result<Self> {
        if v.n() != eigen.len() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} eigenvector matrix with {} eigenvalues",
                v.n(),
                v.n(),
                eigen.len()
            )));
        }
        let unitary = if S::EXACT {
            (&v.adjoint() * &v) == CMatrix::identity(v.n())
        } else {
            v.unitarity_residual() <= 1e-10
        };
        if !unitary {
            return Err(Error::NotUnitary {
                residual: v.unitarity_residual(),
            });
        }
        Ok(Self { v, eigen })
    }

    pub fn diagonal(eigen: Vec<Complex<S>>) -> Self {
        Self {
            v: CMatrix::identity(eigen.len()),
            eigen,
        }
    }

    pub fn n(&self) -> usize {
        self.eigen.len()
    }

    pub fn vectors(&self) -> &CMatrix<S> {
        &self.v
    }

    pub fn eigenvalues(&self) -> &[Complex<S>] {
        &self.eigen
    }

    /// `V diag(values) V*`.
    pub fn conjugate_diag(&self, values: &[Complex<S>]) -> CMatrix<S> {
        let d = CMatrix::from_diag(values);
        &(&self.v * &d) * &self.v.adjoint()
    }

    pub fn matrix(&self) -> CMatrix<S> {
        self.conjugate_diag(&self.eigen)
    }
}

/// Rational unitary from the Cayley transform `(I - A)(I + A)^{-1}` of a
/// skew-Hermitian `A`.
pub fn cayley_unitary<S: Scalar>(skew: &CMatrix<S>) -> Result<CMatrix<S>> {
    let herm_residual = (skew + &skew.adjoint()).max_abs();
    if herm_residual > if S::EXACT { 0.0 } else { 1e-12 } {
        return Err(Error::InvalidArgument("Cayley transform needs a skew-Hermitian matrix".into()));
    }
    let id = CMatrix::identity(skew.n());
    let inv = (&id + skew).inverse().ok_or_else(|| Error::InvalidArgument("I + A is singular".into()))?;
    Ok(&(&id - skew) * &inv)
}

/// Hermitian part `(M + M*)/2` of a numeric matrix.
pub fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `f(M)` for a Hermitian `M` through its eigendecomposition.
pub fn hermitian_function(m: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let eig = hermitian_part(m).symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(f(x), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `M^{-1/2}` of a Hermitian positive definite matrix.
///
/// Eigenvalues are floored at `1e-300` before inversion; a non-positive
/// eigenvalue is an error.
pub fn hermitian_inv_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_part(m).symmetric_eigen();
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&x| x <= 0.0) {
        return Err(Error::NotPositive(bad));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(1.0 / x.max(1e-300).sqrt(), 0.0)));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

pub fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

pub fn max_abs_c64(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_residual_c64(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    max_abs_c64(&(u.adjoint() * u - DMatrix::identity(n, n)))
}

pub fn normality_residual_c64(x: &DMatrix<Complex64>) -> f64 {
    let a = x.adjoint();
    max_abs_c64(&(&a * x - x * &a))
}

pub fn from_c64<S: Scalar>(m: &DMatrix<Complex64>, conv: impl Fn(f64) -> S) -> CMatrix<S> {
    assert_eq!(m.nrows(), m.ncols());
    CMatrix::from_fn(m.nrows(), |i, j| Complex::new(conv(m[(i, j)].re), conv(m[(i, j)].im)))
}
