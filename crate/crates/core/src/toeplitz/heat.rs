//! Exact Berezin transforms of `T_{f^#}` and `T_{f^#} T_{g^#}` on the normal
//! domain. After the Haar average both reduce to Gaussian integrals centred at
//! the eigenvalues of `X`, which the Wick engine evaluates as polynomials in `h`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hpoly::HPolynomial;
use crate::linalg::{CMatrix, SpectralForm};
use crate::measures::{wick_moment_h, GaussianSpec};
use crate::scalar::Scalar;
use crate::symcalc::{PolySymbol, SymmetricSymbol};

fn check_dims<S: Scalar>(f: &SymmetricSymbol<S>, x: &SpectralForm<S>) -> Result<()> {
    if f.n() != x.n() {
        return Err(Error::ShapeMismatch(format!("symbol in {} variables, X is {}x{}", f.n(), x.n(), x.n())));
    }
    Ok(())
}

/// `V diag_k(e_k(h)) V*` from one series per eigenvalue.
pub fn assemble_spectral<S: Scalar>(x: &SpectralForm<S>, per_eigen: &[HPolynomial<Complex<S>>]) -> HPolynomial<CMatrix<S>> {
    let n = x.n();
    let lo = per_eigen.iter().filter_map(HPolynomial::valuation).min().unwrap_or(0);
    let hi = per_eigen.iter().filter_map(HPolynomial::degree).max().unwrap_or(-1);
    let coeffs = (lo..=hi)
        .map(|p| x.conjugate_diag(&per_eigen.iter().map(|e| e.coeff(p)).collect::<Vec<_>>()))
        .collect();
    HPolynomial::laurent(CMatrix::zeros(n), lo, coeffs)
}

/// `Σ_r h^r u_r^#(X)` for a series of one-variable symbols.
pub fn sharp_series<S: Scalar>(x: &SpectralForm<S>, series: &HPolynomial<PolySymbol<S>>) -> HPolynomial<CMatrix<S>> {
    let per_eigen: Vec<HPolynomial<Complex<S>>> = x
        .eigenvalues()
        .iter()
        .map(|c| series.map(Complex::zero(), |u| u.eval(std::slice::from_ref(c))))
        .collect();
    assemble_spectral(x, &per_eigen)
}

/// `W̃T_{f^#}(X) = V diag_k(∫ f(d) e^{−‖d − c_k χ_1‖²/h} dd/(πh)^N) V*`.
pub fn berezin_heat_exact<S: Scalar>(f: &SymmetricSymbol<S>, x: &SpectralForm<S>) -> Result<HPolynomial<CMatrix<S>>> {
    check_dims(f, x)?;
    let n = f.n();
    let iid = GaussianSpec::centered_iid(n);
    let per_eigen = x
        .eigenvalues()
        .iter()
        .map(|c| {
            let mut mean = vec![Complex::zero(); n];
            mean[0] = c.clone();
            wick_moment_h(&iid.with_mean(mean)?, f.base())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_spectral(x, &per_eigen))
}

/// Phase matrix of the coupled Gaussian in `(d_1..d_N, e_1..e_N)`: identity
/// except for the `−d_1 ē_1` cross term.
pub fn coupled_phase<S: Scalar>(n: usize) -> CMatrix<S> {
    let mut a = CMatrix::identity(2 * n);
    a.set(n, 0, -Complex::<S>::new(S::one(), S::zero()));
    a
}

/// `f(d) g(e)` as a polynomial in `2N` variables (`d` first).
pub fn tensor_pair<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> PolySymbol<S> {
    let n = f.n();
    let fd = f.base().embed(2 * n, &(0..n).collect::<Vec<_>>());
    let ge = g.base().embed(2 * n, &(n..2 * n).collect::<Vec<_>>());
    &fd * &ge
}

/// `W̃(T_{f^#} T_{g^#})(X)`: for each eigenvalue `c` the integral of `f(d) g(e)`
/// against `e^{−|c|²/h} e^{(d̄_1 c + d_1 ē_1 + e_1 c̄)/h}` times the iid
/// Gaussian, i.e. a Gaussian with mean `(c χ_1, c χ_1)` and phase
/// [`coupled_phase`].
pub fn berezin_product_exact<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, x: &SpectralForm<S>) -> Result<HPolynomial<CMatrix<S>>> {
    check_dims(f, x)?;
    check_dims(g, x)?;
    let n = f.n();
    let phase = coupled_phase::<S>(n);
    let integrand = tensor_pair(f, g);
    let per_eigen = x
        .eigenvalues()
        .iter()
        .map(|c| {
            let mut mean = vec![Complex::zero(); 2 * n];
            mean[0] = c.clone();
            mean[n] = c.clone();
            wick_moment_h(&GaussianSpec::from_quadratic_phase(mean, &phase)?, &integrand)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_spectral(x, &per_eigen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cayley_unitary;
    use crate::scalar::{c_int, cx, factorial};
    use num_rational::BigRational;

    type Q = BigRational;
    type P = PolySymbol<Q>;
    type C = Complex<Q>;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn modsq(n: usize, v: usize) -> P {
        &P::var(n, v) * &P::conj_var(n, v)
    }

    fn sample_normal(n: usize) -> SpectralForm<Q> {
        let skew = CMatrix::from_fn(n, |i, j| {
            if i == j {
                cx(Q::zero(), q(i as i64 + 1, 3))
            } else if i < j {
                cx(q(1, 2 + i as i64), q(j as i64, 5))
            } else {
                cx(-q(1, 2 + j as i64), q(i as i64, 5))
            }
        });
        let v = cayley_unitary(&skew).unwrap();
        let eigen = (0..n).map(|k| cx(q(k as i64 - 1, 2), q(1, k as i64 + 2))).collect();
        SpectralForm::new(v, eigen).unwrap()
    }

    #[test]
    fn product_of_moduli_gives_nulo_identity() {
        for n in [2usize, 3] {
            let x = sample_normal(n);
            let got = berezin_heat_exact(&SymmetricSymbol::product_of_moduli(n), &x).unwrap();
            let xm = x.matrix();
            let expected = HPolynomial::from_coeffs(CMatrix::zeros(n), {
                let mut c = vec![CMatrix::zeros(n); n + 1];
                c[n - 1] = &xm.adjoint() * &xm;
                c[n] = CMatrix::identity(n);
                c
            });
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn constant_symbol_gives_identity() {
        let x = sample_normal(2);
        let one = SymmetricSymbol::new(P::one(2)).unwrap();
        assert_eq!(berezin_heat_exact(&one, &x).unwrap(), HPolynomial::constant(CMatrix::identity(2)));
        assert_eq!(berezin_product_exact(&one, &one, &x).unwrap(), HPolynomial::constant(CMatrix::identity(2)));
    }

    #[test]
    fn spectral_symbol_at_scalar_matrix_is_scalar_heat() {
        let u = &(&modsq(1, 0) * &modsq(1, 0)) + &P::var(1, 0).pow(3);
        let f = SymmetricSymbol::spectral(&u, 3).unwrap();
        let c = cx(q(1, 3), q(-2, 5));
        let x = SpectralForm::diagonal(vec![c.clone(); 3]);
        let got = berezin_heat_exact(&f, &x).unwrap();
        let coeffs: Vec<CMatrix<Q>> = (0..3)
            .map(|j| CMatrix::identity(3).scale(&(u.laplacian_all(j).eval(std::slice::from_ref(&c)) / C::new(factorial::<Q>(j), Q::zero()))))
            .collect();
        assert_eq!(got, HPolynomial::from_coeffs(CMatrix::zeros(3), coeffs));
    }

    #[test]
    fn product_with_one_is_heat() {
        let f = SymmetricSymbol::new(&(&modsq(2, 0) * &modsq(2, 1)) + &P::var(2, 0).pow(2)).unwrap();
        let one = SymmetricSymbol::new(P::one(2)).unwrap();
        let x = sample_normal(2);
        let heat = berezin_heat_exact(&f, &x).unwrap();
        assert_eq!(berezin_product_exact(&f, &one, &x).unwrap(), heat);
        assert_eq!(berezin_product_exact(&one, &f, &x).unwrap(), heat);
    }

    #[test]
    fn scalar_modulus_squared_product() {
        // T_{|z|²}² has Wick symbol |z|⁴ − h|z|², whose heat transform is |c|⁴ + 3h|c|² + h²
        let f = SymmetricSymbol::new(modsq(1, 0)).unwrap();
        let c = cx(q(3, 4), q(1, 2));
        let x = SpectralForm::diagonal(vec![c.clone()]);
        let r = (c.clone() * c.conj()).re;
        let expected = HPolynomial::from_coeffs(
            CMatrix::zeros(1),
            vec![
                CMatrix::from_diag(&[cx(r.clone() * r.clone(), Q::zero())]),
                CMatrix::from_diag(&[cx(q(3, 1) * r, Q::zero())]),
                CMatrix::from_diag(&[c_int(1)]),
            ],
        );
        assert_eq!(berezin_product_exact(&f, &f, &x).unwrap(), expected);
    }
}
