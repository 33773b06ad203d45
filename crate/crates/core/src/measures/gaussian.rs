//! Complex Gaussian measures and exact Wick moments.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hpoly::HPolynomial;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::scalar::{binomial, close, cpow, factorial, is_zero_c, Scalar};
use crate::symcalc::{MatrixPoly, PolySymbol};

/// Largest total degree accepted by the Wick engine.
pub const MAX_WICK_DEGREE: u32 = 40;

/// Complex Gaussian on `C^dim` with mean `m` and second moments
/// `E[(w_a − m_a) conj(w_b − m_b)] = h · cov[a][b]`.
///
/// The covariance is stored per unit `h`, so moments come out as polynomials in `h`.
/// A covariance built from a quadratic phase may be non-Hermitian; the
/// integral is then the analytic continuation of the Hermitian case.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec<S: Scalar> {
    mean: Vec<Complex<S>>,
    cov: CMatrix<S>,
}

fn check_shape<S: Scalar>(mean: &[Complex<S>], m: &CMatrix<S>) -> Result<()> {
    if mean.len() != m.n() {
        return Err(Error::ShapeMismatch(format!("mean has length {}, matrix is {}x{}", mean.len(), m.n(), m.n())));
    }
    Ok(())
}

fn check_positive_definite(m: &DMatrix<Complex64>, what: &str) -> Result<()> {
    let min = hermitian_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite(format!("{what}: smallest eigenvalue {min:e}")));
    }
    Ok(())
}

impl<S: Scalar> GaussianSpec<S> {
    /// Hermitian positive-definite covariance (per unit `h`).
    pub fn new(mean: Vec<Complex<S>>, cov: CMatrix<S>) -> Result<Self> {
        check_shape(&mean, &cov)?;
        let adj = cov.adjoint();
        let hermitian = (0..cov.n()).all(|a| (0..cov.n()).all(|b| close(cov.get(a, b), adj.get(a, b))));
        if !hermitian {
            return Err(Error::NotPositiveDefinite("covariance is not Hermitian".into()));
        }
        if nalgebra::Cholesky::new(cov.to_c64()).is_none() {
            return Err(Error::NotPositiveDefinite("Cholesky factorization failed".into()));
        }
        Ok(Self { mean, cov })
    }

    /// Centered, unit covariance per `h`: the iid measure `e^{-|w|²/h}/(πh)^dim`.
    pub fn centered_iid(dim: usize) -> Self {
        Self {
            mean: vec![Complex::zero(); dim],
            cov: CMatrix::identity(dim),
        }
    }

    /// Weight `exp(−(w − m)* A (w − m)/h)` normalized to mass one, for `A` whose
    /// Hermitian part is positive definite. Second moments are `h A^{-1}`.
    pub fn from_quadratic_phase(mean: Vec<Complex<S>>, precision: &CMatrix<S>) -> Result<Self> {
        check_shape(&mean, precision)?;
        let a = precision.to_c64();
        check_positive_definite(&((&a + a.adjoint()) * Complex64::new(0.5, 0.0)), "Hermitian part of the phase")?;
        let cov = precision.inverse().ok_or_else(|| Error::NotPositiveDefinite("singular phase matrix".into()))?;
        Ok(Self { mean, cov })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[Complex<S>] {
        &self.mean
    }

    pub fn covariance(&self) -> &CMatrix<S> {
        &self.cov
    }

    pub fn with_mean(&self, mean: Vec<Complex<S>>) -> Result<Self> {
        check_shape(&mean, &self.cov)?;
        Ok(Self { mean, cov: self.cov.clone() })
    }

    fn check_poly(&self, p: &PolySymbol<S>) -> Result<()> {
        if p.nvars() != self.dim() {
            return Err(Error::NvarsMismatch {
                left: p.nvars(),
                right: self.dim(),
            });
        }
        let d = p.degree();
        if d > MAX_WICK_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: d,
                bound: MAX_WICK_DEGREE,
            });
        }
        Ok(())
    }
}

type Memo<S> = HashMap<(Vec<u32>, Vec<u32>), Complex<S>>;

/// Sum over perfect matchings of holomorphic with antiholomorphic factors.
fn centered<S: Scalar>(cov: &CMatrix<S>, alpha: &mut [u32], beta: &mut [u32], memo: &mut Memo<S>) -> Complex<S> {
    let Some(a) = alpha.iter().position(|&e| e > 0) else {
        return Complex::one();
    };
    let key = (alpha.to_vec(), beta.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    alpha[a] -= 1;
    let mut acc = Complex::zero();
    for b in 0..beta.len() {
        if beta[b] == 0 || is_zero_c(cov.get(a, b)) {
            continue;
        }
        let mult = Complex::new(S::from_int(beta[b] as i64), S::zero());
        beta[b] -= 1;
        let rest = centered(cov, alpha, beta, memo);
        beta[b] += 1;
        acc = acc + mult * cov.get(a, b).clone() * rest;
    }
    alpha[a] += 1;
    memo.insert(key, acc.clone());
    acc
}

/// All multi-indices `γ ≤ bound` componentwise.
fn sub_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Exact expectation of `p` as a polynomial in `h`, via Wick pairings and a
/// binomial mean shift.
pub fn wick_moment_h<S: Scalar>(spec: &GaussianSpec<S>, p: &PolySymbol<S>) -> Result<HPolynomial<Complex<S>>> {
    spec.check_poly(p)?;
    let n = spec.dim();
    let mean_conj: Vec<Complex<S>> = spec.mean.iter().map(|m| m.conj()).collect();
    let mut memo = Memo::new();
    let mut by_power: Vec<Complex<S>> = Vec::new();
    for (mono, coeff) in p.terms() {
        let (hol, anti) = (mono.hol(), mono.anti());
        let subs_a = sub_indices(hol);
        let subs_b = sub_indices(anti);
        for ga in &subs_a {
            let pa: u32 = ga.iter().sum();
            let mut wa = coeff.clone();
            for v in 0..n {
                let rest = hol[v] - ga[v];
                if rest > 0 {
                    wa = wa * cpow(&spec.mean[v], rest) * Complex::new(binomial::<S>(hol[v], ga[v]), S::zero());
                }
            }
            if is_zero_c(&wa) {
                continue;
            }
            for gb in subs_b.iter().filter(|g| g.iter().sum::<u32>() == pa) {
                let mut w = wa.clone();
                for v in 0..n {
                    let rest = anti[v] - gb[v];
                    if rest > 0 {
                        w = w * cpow(&mean_conj[v], rest) * Complex::new(binomial::<S>(anti[v], gb[v]), S::zero());
                    }
                }
                if is_zero_c(&w) {
                    continue;
                }
                let c = centered(&spec.cov, &mut ga.clone(), &mut gb.clone(), &mut memo);
                if is_zero_c(&c) {
                    continue;
                }
                let k = pa as usize;
                if by_power.len() <= k {
                    by_power.resize(k + 1, Complex::zero());
                }
                by_power[k] = by_power[k].clone() + w * c;
            }
        }
    }
    Ok(HPolynomial::from_coeffs(Complex::zero(), by_power))
}

/// Exact expectation at a given `h`.
pub fn wick_moment<S: Scalar>(spec: &GaussianSpec<S>, p: &PolySymbol<S>, h: &S) -> Result<Complex<S>> {
    Ok(wick_moment_h(spec, p)?.eval(h))
}

/// Entrywise expectation of a matrix polynomial.
pub fn wick_moment_matrix_h<S: Scalar>(spec: &GaussianSpec<S>, p: &MatrixPoly<S>) -> Result<HPolynomial<CMatrix<S>>> {
    let n = p.n();
    let mut entries = Vec::with_capacity(n * n);
    let mut top = 0;
    for a in 0..n {
        for b in 0..n {
            let e = wick_moment_h(spec, p.get(a, b))?;
            top = top.max(e.degree().unwrap_or(0));
            entries.push(e);
        }
    }
    let coeffs = (0..=top).map(|k| CMatrix::from_fn(n, |a, b| entries[a * n + b].coeff(k))).collect();
    Ok(HPolynomial::from_coeffs(CMatrix::zeros(n), coeffs))
}

/// Expectation through the operator series `Σ_j 𝒬^j p / j!` at the mean, with
/// `𝒬 = Σ_{ab} cov[a][b] ∂_a ∂̄_b`. Independent of the pairing recursion.
pub fn stationary_phase_moment<S: Scalar>(spec: &GaussianSpec<S>, p: &PolySymbol<S>) -> Result<HPolynomial<Complex<S>>> {
    spec.check_poly(p)?;
    let n = spec.dim();
    let mut op = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let c = spec.cov.get(a, b);
            if !is_zero_c(c) {
                op.push((a, b, c.clone()));
            }
        }
    }
    let mut coeffs = Vec::new();
    let mut cur = p.clone();
    let mut j = 0u32;
    while !cur.is_zero() {
        let inv = Complex::new(S::one() / factorial::<S>(j), S::zero());
        coeffs.push(cur.eval(&spec.mean) * inv);
        cur = cur.apply_second_order(&op)?;
        j += 1;
    }
    Ok(HPolynomial::from_coeffs(Complex::zero(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c_int, cr};
    use crate::symcalc::entry_var;
    use num_rational::BigRational;

    type P = PolySymbol<BigRational>;
    type G = GaussianSpec<BigRational>;

    #[test]
    fn second_moments_of_iid_entries() {
        let n = 2;
        let spec = G::centered_iid(n * n);
        for (i, j, k, l) in [(0, 0, 0, 0), (0, 1, 0, 1), (0, 1, 1, 0), (1, 1, 0, 0)] {
            let p = &P::var(4, entry_var(n, i, j)) * &P::conj_var(4, entry_var(n, k, l));
            let m = wick_moment_h(&spec, &p).unwrap();
            let expect = if i == k && j == l {
                HPolynomial::monomial(c_int(1), 1)
            } else {
                HPolynomial::zero(c_int(0))
            };
            assert_eq!(m, expect);
        }
    }

    #[test]
    fn one_dimensional_moments_are_factorials() {
        let spec = G::centered_iid(1);
        for m in 0..8u32 {
            let p = &P::var(1, 0).pow(m) * &P::conj_var(1, 0).pow(m);
            let got = wick_moment_h(&spec, &p).unwrap();
            assert_eq!(got, HPolynomial::monomial(Complex::new(factorial(m), BigRational::zero()), m as i32));
        }
    }

    #[test]
    fn unbalanced_monomials_vanish() {
        let spec = G::centered_iid(3);
        let p = &(&P::var(3, 0) * &P::var(3, 1)) * &P::conj_var(3, 2);
        assert!(wick_moment_h(&spec, &p).unwrap().is_zero());
    }

    #[test]
    fn mean_shift_matches_operator_series() {
        let mean = vec![Complex::new(BigRational::from_ratio(1, 2), BigRational::from_int(-1)), cr(3, 1)];
        let cov = CMatrix::from_rows(vec![
            vec![c_int(2), Complex::new(BigRational::zero(), BigRational::one())],
            vec![Complex::new(BigRational::zero(), -BigRational::one()), c_int(1)],
        ]);
        let spec = G::new(mean, cov).unwrap();
        let z0 = P::var(2, 0);
        let z1b = P::conj_var(2, 1);
        let p = &(&(&z0.pow(2) * &z1b) * &P::conj_var(2, 0)) + &(&z0 * &z1b.pow(2));
        assert_eq!(wick_moment_h(&spec, &p).unwrap(), stationary_phase_moment(&spec, &p).unwrap());
    }

    #[test]
    fn coupled_phase_has_unit_mass_and_expected_covariance() {
        let a = CMatrix::from_rows(vec![vec![c_int(1), c_int(0)], vec![c_int(-1), c_int(1)]]);
        let c = Complex::new(BigRational::from_ratio(2, 3), BigRational::from_ratio(1, 5));
        let spec = G::from_quadratic_phase(vec![c.clone(), c.clone()], &a).unwrap();
        assert_eq!(wick_moment_h(&spec, &P::one(2)).unwrap(), HPolynomial::constant(c_int(1)));
        let e_db = &P::var(2, 1) * &P::conj_var(2, 0);
        let d_eb = &P::var(2, 0) * &P::conj_var(2, 1);
        let cc = c.clone() * c.conj();
        assert_eq!(
            wick_moment_h(&spec, &e_db).unwrap(),
            HPolynomial::from_coeffs(c_int(0), vec![cc.clone(), c_int(1)])
        );
        assert_eq!(wick_moment_h(&spec, &d_eb).unwrap(), HPolynomial::constant(cc));
        assert!(G::new(vec![c_int(0), c_int(0)], a).is_err());
    }

    #[test]
    fn heat_identity_for_polynomials() {
        // ∫ f dμ_h = Σ_j h^j Δ^j f(0) / j!
        let n = 2;
        let y = MatrixPoly::<BigRational>::coordinate(n);
        let f = (&(&y.adjoint() * &y) * &(&y.adjoint() * &y)).trace();
        let spec = G::centered_iid(n * n);
        let lhs = wick_moment_h(&spec, &f).unwrap();
        let coeffs = (0..5)
            .map(|j| f.laplacian_all(j).constant_term() * Complex::new(BigRational::one() / factorial::<BigRational>(j), BigRational::zero()))
            .collect();
        assert_eq!(lhs, HPolynomial::from_coeffs(c_int(0), coeffs));
    }

    #[test]
    fn degree_guard() {
        let spec = G::centered_iid(1);
        let p = &P::var(1, 0).pow(21) * &P::conj_var(1, 0).pow(21);
        assert!(matches!(wick_moment_h(&spec, &p), Err(Error::DegreeTooLarge { .. })));
    }
}
