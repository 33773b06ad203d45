//! Exact Berezin transforms on the full matrix domain at nilpotent points.
//!
//! When `X^m = 0` the kernel `K(X, Y) = Σ_{k<m} X^k Y^{*k} / (c_k h^k)` is a
//! finite sum, so the kernel integrals reduce to finitely many Wick moments
//! `∫ Y^{*k} φ Y^l dμ_h`. Numerators come out as Laurent series in `h`; the
//! normalization `K(X,X)^{-1/2}` is applied numerically at each `h`.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::hpoly::HPolynomial;
use crate::kernels::c_k_formula;
use crate::linalg::{hermitian_inv_sqrt, CMatrix};
use crate::measures::{wick_moment_matrix_h, GaussianSpec};
use crate::scalar::Scalar;
use crate::symcalc::{double_bracket, MatrixPoly};

/// Exact numerator and kernel of a full-domain Berezin transform.
#[derive(Clone, Debug, PartialEq)]
pub struct FullDomainBerezin<S: Scalar> {
    /// `∫ K(X,Y) φ(Y) K(Y,X) dμ_h(Y)` (or the double-integral analogue).
    pub numerator: HPolynomial<CMatrix<S>>,
    /// `K(X, X)`.
    pub kernel: HPolynomial<CMatrix<S>>,
}

impl<S: Scalar> FullDomainBerezin<S> {
    /// `K(X,X)^{-1/2} · numerator · K(X,X)^{-1/2}` at a given `h`.
    pub fn eval(&self, h: f64) -> Result<DMatrix<Complex64>> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::NonPositiveH(h));
        }
        let k = hermitian_inv_sqrt(&self.kernel.eval_f64(h))?;
        Ok(&k * self.numerator.eval_f64(h) * &k)
    }
}

fn c_k<S: Scalar>(n: usize, k: usize) -> Complex<S> {
    Complex::new(S::from_bigint(&c_k_formula(n as u32, k as u32)), S::zero())
}

/// Smallest `m` with `X^m = 0`.
fn nilpotency_index<S: Scalar>(x: &CMatrix<S>) -> Result<usize> {
    let mut p = x.clone();
    for m in 1..=x.n() {
        if p.is_zero() {
            return Ok(m);
        }
        p = &p * x;
    }
    Err(Error::InvalidArgument("exact full-domain transforms need a nilpotent X".into()))
}

fn check_symbol<S: Scalar>(phi: &MatrixPoly<S>, n: usize) -> Result<()> {
    if phi.n() != n || phi.nvars() != n * n {
        return Err(Error::ShapeMismatch(format!(
            "symbol is {}x{} in {} variables, expected {n}x{n} in {}",
            phi.n(),
            phi.n(),
            phi.nvars(),
            n * n
        )));
    }
    Ok(())
}

/// `∫ Y^{*k} φ(Y) Y^l dμ_h` for all `k < rows`, `l < cols`.
fn moment_table<S: Scalar>(phi: &MatrixPoly<S>, rows: usize, cols: usize) -> Result<Vec<Vec<HPolynomial<CMatrix<S>>>>> {
    let n = phi.n();
    let y = MatrixPoly::<S>::coordinate(n);
    let spec = GaussianSpec::centered_iid(n * n);
    let mut left = MatrixPoly::identity(n, n * n);
    let mut table = Vec::with_capacity(rows);
    for k in 0..rows {
        if k > 0 {
            left = &left * &y.adjoint();
        }
        let lphi = &left * phi;
        let mut right = MatrixPoly::identity(n, n * n);
        let mut row = Vec::with_capacity(cols);
        for l in 0..cols {
            if l > 0 {
                right = &right * &y;
            }
            row.push(wick_moment_matrix_h(&spec, &(&lphi * &right))?);
        }
        table.push(row);
    }
    Ok(table)
}

/// `a · p · b / c` with the result multiplied by `h^{shift}`.
fn sandwich<S: Scalar>(a: &CMatrix<S>, p: &HPolynomial<CMatrix<S>>, b: &CMatrix<S>, c: &Complex<S>, shift: i32) -> HPolynomial<CMatrix<S>> {
    let inv = Complex::new(S::one(), S::zero()) / c.clone();
    p.map(CMatrix::zeros(a.n()), |m| (&(a * m) * b).scale(&inv)).shift(shift)
}

fn kernel_at_x<S: Scalar>(x: &CMatrix<S>, m: usize) -> HPolynomial<CMatrix<S>> {
    let n = x.n();
    let mut acc = HPolynomial::zero(CMatrix::zeros(n));
    for k in 0..m {
        let xk = x.pow(k as u32);
        let term = (&xk * &xk.adjoint()).scale(&(Complex::new(S::one(), S::zero()) / c_k::<S>(n, k)));
        acc = acc.add(&HPolynomial::monomial(term, -(k as i32)));
    }
    acc
}

/// `W̃T_φ(X)` on the full domain for nilpotent `X`.
pub fn berezin_full_domain<S: Scalar>(phi: &MatrixPoly<S>, x: &CMatrix<S>) -> Result<FullDomainBerezin<S>> {
    let n = x.n();
    check_symbol(phi, n)?;
    let m = nilpotency_index(x)?;
    let table = moment_table(phi, m, m)?;
    let mut numerator = HPolynomial::zero(CMatrix::zeros(n));
    for k in 0..m {
        for l in 0..m {
            let c = c_k::<S>(n, k) * c_k::<S>(n, l);
            let term = sandwich(&x.pow(k as u32), &table[k][l], &x.adjoint().pow(l as u32), &c, -((k + l) as i32));
            numerator = numerator.add(&term);
        }
    }
    Ok(FullDomainBerezin {
        numerator,
        kernel: kernel_at_x(x, m),
    })
}

/// `W̃(T_φ T_ψ)(X)` on the full domain for nilpotent `X`. The middle kernel
/// `K(Y, Z)` is cut where the moments vanish: `∫ Y^{*k} φ Y^p = 0` once
/// `p > k + deg φ`.
pub fn berezin_full_domain_product<S: Scalar>(phi: &MatrixPoly<S>, psi: &MatrixPoly<S>, x: &CMatrix<S>) -> Result<FullDomainBerezin<S>> {
    let n = x.n();
    check_symbol(phi, n)?;
    check_symbol(psi, n)?;
    let m = nilpotency_index(x)?;
    let middle = m + phi.degree().min(psi.degree()) as usize;
    let a = moment_table(phi, m, middle)?;
    let b = moment_table(&psi.adjoint(), m, middle)?;
    let mut numerator = HPolynomial::zero(CMatrix::zeros(n));
    for k in 0..m {
        for l in 0..m {
            let xk = x.pow(k as u32);
            let xl = x.adjoint().pow(l as u32);
            for p in 0..middle {
                // ∫ Z^{*p} ψ Z^l = (∫ Z^{*l} ψ* Z^p)*
                let bpl = b[l][p].map(CMatrix::zeros(n), CMatrix::adjoint);
                let c = c_k::<S>(n, k) * c_k::<S>(n, p) * c_k::<S>(n, l);
                let inner = a[k][p].mul(&bpl);
                numerator = numerator.add(&sandwich(&xk, &inner, &xl, &c, -((k + p + l) as i32)));
            }
        }
    }
    Ok(FullDomainBerezin {
        numerator,
        kernel: kernel_at_x(x, m),
    })
}

/// `∫∫ φ(Y) K(Y, Z) ψ(Z) dμ_h(Y) dμ_h(Z) = Σ_m [∫ φ Y^m][∫ Z^{*m} ψ] / (c_m h^m)`;
/// the sum stops at `m = min(deg φ, deg ψ)`.
pub fn double_integral_exact<S: Scalar>(phi: &MatrixPoly<S>, psi: &MatrixPoly<S>) -> Result<HPolynomial<CMatrix<S>>> {
    let n = phi.n();
    check_symbol(phi, n)?;
    check_symbol(psi, n)?;
    let top = phi.degree().min(psi.degree()) as usize + 1;
    let a = moment_table(phi, 1, top)?;
    let b = moment_table(&psi.adjoint(), 1, top)?;
    let mut out = HPolynomial::zero(CMatrix::zeros(n));
    for m in 0..top {
        let bm = b[0][m].map(CMatrix::zeros(n), CMatrix::adjoint);
        let term = a[0][m]
            .mul(&bm)
            .map(CMatrix::zeros(n), |c| c.scale(&(Complex::new(S::one(), S::zero()) / c_k::<S>(n, m))));
        out = out.add(&term.shift(-(m as i32)));
    }
    Ok(out)
}

/// Predicted `h^0` and `h^1` coefficients of [`double_integral_exact`]:
/// `φ(0)ψ(0)` and `Δφ(0)ψ(0) + φ(0)Δψ(0) + ⟨⟨φ, ψ⟩⟩(0)`.
pub fn double_integral_prediction<S: Scalar>(phi: &MatrixPoly<S>, psi: &MatrixPoly<S>) -> Result<[CMatrix<S>; 2]> {
    let p0 = phi.at_zero();
    let q0 = psi.at_zero();
    let first = &(&(&phi.laplacian_all(1).at_zero() * &q0) + &(&p0 * &psi.laplacian_all(1).at_zero())) + &double_bracket(phi, psi)?.at_zero();
    Ok([&p0 * &q0, first])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c_int, cx};
    use crate::symcalc::{entry_var, PolySymbol};
    use num_rational::BigRational;

    type Q = BigRational;

    fn nilpotent() -> CMatrix<Q> {
        CMatrix::from_rows(vec![vec![c_int(0), c_int(1)], vec![c_int(0), c_int(0)]])
    }

    fn y(i: usize, j: usize) -> PolySymbol<Q> {
        PolySymbol::var(4, entry_var(2, i, j))
    }

    #[test]
    fn kernel_normalization_matches_closed_form() {
        let b = berezin_full_domain(&MatrixPoly::<Q>::identity(2, 4), &nilpotent()).unwrap();
        for h in [0.3, 0.01] {
            let k = b.kernel.eval_f64(h);
            assert!((k[(0, 0)].re - (1.0 + 1.0 / (2.0 * h))).abs() < 1e-12);
            // identity symbol transforms to I
            let v = b.eval(h).unwrap();
            assert!((v - DMatrix::identity(2, 2)).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn y22_gives_half_root_h_off_diagonal() {
        let phi = MatrixPoly::scalar(2, &y(1, 1));
        let b = berezin_full_domain(&phi, &nilpotent()).unwrap();
        let expected = HPolynomial::constant(CMatrix::from_rows(vec![
            vec![c_int(0), cx(Q::new(1.into(), 2.into()), Q::from_integer(0.into()))],
            vec![c_int(0), c_int(0)],
        ]));
        assert_eq!(b.numerator, expected);
        for h in [0.1, 0.001] {
            let v = b.eval(h).unwrap();
            let predicted = 0.5 * (2.0 * h / (2.0 * h + 1.0)).sqrt();
            assert!((v[(0, 1)].re - predicted).abs() < 1e-14);
        }
    }

    #[test]
    fn product_with_identity_reduces_to_single() {
        let phi = MatrixPoly::from_fn(2, 4, |i, j| &(&y(i, j) * &y(1, 1).conj()) + &PolySymbol::constant(4, c_int((i + 2 * j) as i64)));
        let id = MatrixPoly::identity(2, 4);
        let single = berezin_full_domain(&phi, &nilpotent()).unwrap();
        let product = berezin_full_domain_product(&phi, &id, &nilpotent()).unwrap();
        let product2 = berezin_full_domain_product(&id, &phi, &nilpotent()).unwrap();
        for h in [0.2, 0.01] {
            let s = single.eval(h).unwrap();
            assert!((product.eval(h).unwrap() - &s).iter().all(|z| z.norm() < 1e-10 * (1.0 + s.norm())));
            assert!((product2.eval(h).unwrap() - &s).iter().all(|z| z.norm() < 1e-10 * (1.0 + s.norm())));
        }
    }

    #[test]
    fn double_integral_expansion_for_linear_symbols() {
        // ⟨⟨Y*, Y⟩⟩ contributes Tr·Tr/N at first order
        let y_mat = MatrixPoly::<Q>::coordinate(2);
        let phi = &y_mat.adjoint() + &MatrixPoly::identity(2, 4);
        let psi = &y_mat + &MatrixPoly::identity(2, 4);
        let exact = double_integral_exact(&phi, &psi).unwrap();
        let [p0, p1] = double_integral_prediction(&phi, &psi).unwrap();
        assert_eq!(exact.coeff(0), p0);
        assert_eq!(exact.coeff(1), p1);
    }
}
