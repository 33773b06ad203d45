//! Operators on the span of `Z^k χ_j` (`k ≤ K`) in the orthonormal basis
//! `Z^k χ_j / √(norm_k h^k)`, coherent vectors, and the Berezin transform of
//! such operators.

use nalgebra::{DMatrix, DVector};
use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernels::{basis_norm, norm_ratio, Domain};
use crate::linalg::{hermitian_function, hermitian_inv_sqrt, max_abs_c64, normality_residual_c64, op_norm};
use crate::measures::{wick_moment_matrix_h, GaussianSpec};
use crate::scalar::{factorial, Scalar};
use crate::symcalc::{MatrixPoly, PolySymbol, SymmetricSymbol};

/// Largest cutoff accepted by [`scalar_toeplitz`].
pub const MAX_SCALAR_CUTOFF: usize = 200;

const NORMALITY_TOL: f64 = 1e-10;

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveH(h));
    }
    Ok(())
}

/// Position of the basis vector `Z^k χ_j` in a truncated matrix.
pub fn basis_index(n: usize, k: usize, j: usize) -> usize {
    k * n + j
}

/// Matrix of an operator compressed to `k ≤ cutoff`, size `N(K+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    pub domain: Domain,
    pub n: usize,
    pub h: f64,
    pub cutoff: usize,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(domain: Domain, n: usize, h: f64, cutoff: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_h(h)?;
        let dim = n * (cutoff + 1);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch(format!("expected {dim}x{dim}, got {}x{}", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self { domain, n, h, cutoff, matrix })
    }

    pub fn identity(domain: Domain, n: usize, h: f64, cutoff: usize) -> Result<Self> {
        let dim = n * (cutoff + 1);
        Self::new(domain, n, h, cutoff, DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `⟨T Z^k χ_j, Z^l χ_i⟩` in the orthonormal basis.
    pub fn entry(&self, (l, i): (usize, usize), (k, j): (usize, usize)) -> Complex64 {
        self.matrix[(basis_index(self.n, l, i), basis_index(self.n, k, j))]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            ..self.clone()
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.n != other.n || self.cutoff != other.cutoff || self.h != other.h {
            return Err(Error::ShapeMismatch(format!(
                "operators differ: ({}, N={}, K={}, h={}) vs ({}, N={}, K={}, h={})",
                self.domain.name(),
                self.n,
                self.cutoff,
                self.h,
                other.domain.name(),
                other.n,
                other.cutoff,
                other.h
            )));
        }
        Ok(())
    }

    /// Product of the two compressions (not the compression of the product).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            matrix: &self.matrix * c,
            ..self.clone()
        }
    }

    /// `T ⊗ I_N` for a scalar (`N = 1`) operator, placed on the normal domain.
    pub fn tensor_identity(&self, n: usize) -> Result<Self> {
        if self.n != 1 {
            return Err(Error::InvalidArgument(format!("tensoring needs a scalar operator, got N={}", self.n)));
        }
        let k1 = self.cutoff + 1;
        let matrix = DMatrix::from_fn(
            n * k1,
            n * k1,
            |r, c| {
                if r % n == c % n {
                    self.matrix[(r / n, c / n)]
                } else {
                    Complex64::zero()
                }
            },
        );
        Self::new(Domain::Normal, n, self.h, self.cutoff, matrix)
    }

    pub fn hermitian_residual(&self) -> f64 {
        max_abs_c64(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn norm(&self) -> f64 {
        op_norm(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(max_abs_c64(&(&self.matrix - &other.matrix)))
    }
}

/// A U-invariant symbol `f^#(Z) · e^{−s Tr Z*Z}` with polynomial `f`, `s ≥ 0`.
///
/// With one variable this is the scalar class `p(z, z̄) e^{−s|z|²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSymbol<S: Scalar> {
    symbol: SymmetricSymbol<S>,
    s: S,
}

impl<S: Scalar> WeightedSymbol<S> {
    pub fn new(symbol: SymmetricSymbol<S>, s: S) -> Result<Self> {
        if s.to_f64() < 0.0 {
            return Err(Error::UnsupportedSymbol(format!("Gaussian weight exponent must be non-negative, got {s}")));
        }
        Ok(Self { symbol, s })
    }

    pub fn plain(symbol: SymmetricSymbol<S>) -> Self {
        Self { symbol, s: S::zero() }
    }

    /// One-variable symbol `p(z, z̄) e^{−s|z|²}`.
    pub fn scalar(poly: PolySymbol<S>, s: S) -> Result<Self> {
        if poly.nvars() != 1 {
            return Err(Error::UnsupportedSymbol(format!("scalar symbol must have one variable, got {}", poly.nvars())));
        }
        Self::new(SymmetricSymbol::new(poly)?, s)
    }

    pub fn symbol(&self) -> &SymmetricSymbol<S> {
        &self.symbol
    }

    pub fn weight(&self) -> &S {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.symbol.n()
    }

    /// `f(d_m; d_1, …)` for each slot `m`: the base with variables `0` and `m` swapped.
    fn orbit(&self) -> Vec<PolySymbol<S>> {
        let n = self.n();
        (0..n)
            .map(|m| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(0, m);
                self.symbol.base().permute(&perm)
            })
            .collect()
    }
}

/// `∫ |w|^{2a} e^{−s|w|²} dμ_h(w) = a! h^a / (1 + sh)^{a+1}`.
pub fn weighted_moment<S: Scalar>(a: u32, s: &S, h: &S) -> S {
    let q = S::one() + s.clone() * h.clone();
    let mut out = factorial::<S>(a) / q.clone();
    for _ in 0..a {
        out = out * h.clone() / q.clone();
    }
    out
}

/// Exact coefficient of `Z^l χ` in `T_φ Z^k χ` for a U-invariant weighted symbol:
/// `(1/N) Σ_m E[d̄_m^l d_m^k f(d_m; …) e^{−s|d|²}] / (l! h^l)`.
///
/// On the diagonal this is the eigenvalue-type matrix element `⟨T Z^kχ, Z^kχ⟩/‖Z^kχ‖²`.
pub fn toeplitz_coefficient_exact<S: Scalar>(sym: &WeightedSymbol<S>, h: &S, l: u32, k: u32) -> Complex<S> {
    let n = sym.n();
    let mut acc = Complex::<S>::zero();
    for (m, f) in sym.orbit().iter().enumerate() {
        for (mono, c) in f.terms() {
            let mut value = S::one();
            for v in 0..n {
                let (extra_a, extra_b) = if v == m { (k, l) } else { (0, 0) };
                let a = mono.hol_exp(v) + extra_a;
                if a != mono.anti_exp(v) + extra_b {
                    value = S::zero();
                    break;
                }
                value = value * weighted_moment(a, &sym.s, h);
            }
            acc = acc + c.clone() * Complex::new(value, S::zero());
        }
    }
    let mut den = factorial::<S>(l) * S::from_int(n as i64);
    for _ in 0..l {
        den = den * h.clone();
    }
    acc / Complex::new(den, S::zero())
}

/// Orthonormal matrix element between `Z^l` and `Z^k` in `f64`, computed as
/// products of `√((k+i) h)` so that large `k` neither overflows nor underflows.
fn normalized_element(orbit: &[PolySymbol<f64>], s: f64, h: f64, l: usize, k: usize) -> Complex64 {
    let n = orbit.len();
    let q = 1.0 + s * h;
    let mut acc = Complex64::zero();
    for (m, f) in orbit.iter().enumerate() {
        for (mono, c) in f.terms() {
            let (alpha, beta) = (mono.hol_exp(m) as usize, mono.anti_exp(m) as usize);
            if k + alpha != l + beta {
                continue;
            }
            let mut value = (1..=alpha).map(|i| ((k + i) as f64 * h).sqrt()).product::<f64>()
                * (1..=beta).map(|i| ((l + i) as f64 * h).sqrt()).product::<f64>()
                * q.powi(-((k + alpha + 1) as i32));
            for v in (0..n).filter(|&v| v != m) {
                let a = mono.hol_exp(v);
                if a != mono.anti_exp(v) {
                    value = 0.0;
                    break;
                }
                value *= weighted_moment(a, &s, &h);
            }
            acc += c * value;
        }
    }
    acc / n as f64
}

fn block_matrix(sym: &WeightedSymbol<f64>, h: f64, cutoff: usize) -> DMatrix<Complex64> {
    let orbit = sym.orbit();
    DMatrix::from_fn(cutoff + 1, cutoff + 1, |l, k| normalized_element(&orbit, sym.s, h, l, k))
}

/// `T_φ` on the Segal-Bargmann space for `φ = p(z, z̄) e^{−s|z|²}`.
pub fn scalar_toeplitz(sym: &WeightedSymbol<f64>, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_h(h)?;
    if sym.n() != 1 {
        return Err(Error::UnsupportedSymbol(format!(
            "scalar Toeplitz operator needs a one-variable symbol, got {}",
            sym.n()
        )));
    }
    if cutoff > MAX_SCALAR_CUTOFF {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} exceeds {MAX_SCALAR_CUTOFF}")));
    }
    TruncatedOperator::new(Domain::Normal, 1, h, cutoff, block_matrix(sym, h, cutoff))
}

/// `T_φ` on the normal domain for a U-invariant weighted symbol, from the
/// Haar trace average of the matrix elements (no reduction to one variable).
pub fn normal_domain_toeplitz(sym: &WeightedSymbol<f64>, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_h(h)?;
    let block = TruncatedOperator::new(Domain::Normal, 1, h, cutoff, block_matrix(sym, h, cutoff))?;
    block.tensor_identity(sym.n())
}

/// Diagonal element `⟨T_φ Z^kχ, Z^kχ⟩ / ‖Z^kχ‖²` in `f64`, usable for `k` far beyond any cutoff.
pub fn normal_domain_diagonal(sym: &WeightedSymbol<f64>, h: f64, k: usize) -> Complex64 {
    normalized_element(&sym.orbit(), sym.s, h, k, k)
}

/// `T_φ` on the full domain for a matrix polynomial symbol in the `N²` entries,
/// with elements `[∫ Y^{*l} φ Y^k dμ_h]_{ij} / √(c_l c_k h^{l+k})`.
pub fn full_domain_toeplitz<S: Scalar>(phi: &MatrixPoly<S>, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_h(h)?;
    let n = phi.n();
    if phi.nvars() != n * n {
        return Err(Error::NvarsMismatch {
            left: phi.nvars(),
            right: n * n,
        });
    }
    let y = MatrixPoly::<S>::coordinate(n);
    let ys = y.adjoint();
    let mut powers = vec![MatrixPoly::identity(n, n * n)];
    let mut adj_powers = vec![MatrixPoly::identity(n, n * n)];
    for k in 1..=cutoff {
        powers.push(&powers[k - 1] * &y);
        adj_powers.push(&adj_powers[k - 1] * &ys);
    }
    let scale: Vec<f64> = (0..=cutoff)
        .map(|k| {
            let c = S::from_bigint(&basis_norm(Domain::Full, n as u32, k as u32)).to_f64();
            (c * h.powi(k as i32)).sqrt().recip()
        })
        .collect();
    let spec = GaussianSpec::centered_iid(n * n);
    let dim = n * (cutoff + 1);
    let mut matrix = DMatrix::zeros(dim, dim);
    for l in 0..=cutoff {
        let left = &adj_powers[l] * phi;
        for k in 0..=cutoff {
            let block = wick_moment_matrix_h(&spec, &(&left * &powers[k]))?.eval_f64(h);
            for i in 0..n {
                for j in 0..n {
                    matrix[(basis_index(n, l, i), basis_index(n, k, j))] = block[(i, j)] * (scale[l] * scale[k]);
                }
            }
        }
    }
    TruncatedOperator::new(Domain::Full, n, h, cutoff, matrix)
}

/// Multiplication by `Z`, `Z^k χ ↦ Z^{k+1} χ`, compressed to `k ≤ cutoff`.
pub fn shift_operator(domain: Domain, n: usize, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_h(h)?;
    let dim = n * (cutoff + 1);
    let mut matrix = DMatrix::zeros(dim, dim);
    for k in 0..cutoff {
        let w = Complex64::new((h * norm_ratio(domain, n as u32, k as u32 + 1)).sqrt(), 0.0);
        for j in 0..n {
            matrix[(basis_index(n, k + 1, j), basis_index(n, k, j))] = w;
        }
    }
    TruncatedOperator::new(domain, n, h, cutoff, matrix)
}

/// Coefficients of `K(·, X)χ` in the orthonormal basis:
/// entry `(k, j) = [X^{*k} χ]_j / √(norm_k h^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentVector {
    pub domain: Domain,
    pub n: usize,
    pub h: f64,
    pub cutoff: usize,
    pub coeffs: DVector<Complex64>,
}

impl CoherentVector {
    /// Truncated `χ* K(X, X) χ`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.norm_squared()
    }
}

pub fn coherent_vector(domain: Domain, x: &DMatrix<Complex64>, chi: &DVector<Complex64>, h: f64, cutoff: usize) -> Result<CoherentVector> {
    check_h(h)?;
    let n = x.nrows();
    if x.ncols() != n || chi.len() != n {
        return Err(Error::ShapeMismatch(format!("X is {}x{}, χ has length {}", x.nrows(), x.ncols(), chi.len())));
    }
    let xs = x.adjoint();
    let mut coeffs = DVector::zeros(n * (cutoff + 1));
    let mut v = chi.clone();
    for k in 0..=cutoff {
        if k > 0 {
            v = &xs * v / Complex64::new((h * norm_ratio(domain, n as u32, k as u32)).sqrt(), 0.0);
        }
        coeffs.rows_mut(k * n, n).copy_from(&v);
    }
    Ok(CoherentVector { domain, n, h, cutoff, coeffs })
}

/// Cutoff needed for the coherent vectors at `X`: with `M = ‖X‖²/h`,
/// `M + 10√M + 10` (for normal `X`, `‖X‖` is the largest `|c_a|`).
pub fn required_cutoff(x: &DMatrix<Complex64>, h: f64) -> usize {
    let m = op_norm(x).powi(2) / h;
    (m + 10.0 * m.sqrt() + 10.0).ceil() as usize
}

/// Berezin transform value together with the truncation diagnosis.
#[derive(Clone, Debug, PartialEq)]
pub struct BerezinEval {
    pub value: DMatrix<Complex64>,
    pub required_cutoff: usize,
    pub adequate: bool,
}

/// `K(X,X)^{-1/2} [⟨T K_{X,e_j}, K_{X,e_i}⟩]_{ij} K(X,X)^{-1/2}`.
///
/// On the normal domain `K(X,X) = exp(XX*/h)` comes from the spectral form; on
/// the full domain it is the truncated Gram matrix of the coherent vectors.
/// In strict mode an inadequate cutoff is an error instead of a flag.
pub fn berezin_of_operator(t: &TruncatedOperator, x: &DMatrix<Complex64>, strict: bool) -> Result<BerezinEval> {
    let n = t.n;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::ShapeMismatch(format!("operator has N={n}, X is {}x{}", x.nrows(), x.ncols())));
    }
    let required = required_cutoff(x, t.h);
    let adequate = t.cutoff >= required;
    if strict && !adequate {
        return Err(Error::TruncationInadequate { cutoff: t.cutoff, required });
    }
    let mut v = DMatrix::zeros(t.dim(), n);
    for j in 0..n {
        let chi = DVector::from_fn(n, |i, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() });
        v.set_column(j, &coherent_vector(t.domain, x, &chi, t.h, t.cutoff)?.coeffs);
    }
    let raw = v.adjoint() * &t.matrix * &v;
    let k_inv_sqrt = match t.domain {
        Domain::Normal => {
            let residual = normality_residual_c64(x);
            if residual > NORMALITY_TOL * max_abs_c64(x).max(1.0).powi(2) {
                return Err(Error::NotNormal { residual });
            }
            let h = t.h;
            hermitian_function(&(x * x.adjoint()), move |lam| (-lam / (2.0 * h)).exp())
        }
        Domain::Full => hermitian_inv_sqrt(&(v.adjoint() * &v))?,
    };
    Ok(BerezinEval {
        value: &k_inv_sqrt * raw * &k_inv_sqrt,
        required_cutoff: required,
        adequate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel;
    use num_rational::BigRational;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar_sym(p: PolySymbol<f64>, s: f64) -> WeightedSymbol<f64> {
        WeightedSymbol::scalar(p, s).unwrap()
    }

    #[test]
    fn constant_symbol_gives_identity() {
        let t = scalar_toeplitz(&scalar_sym(PolySymbol::one(1), 0.0), 0.3, 12).unwrap();
        assert!(max_abs_c64(&(&t.matrix - DMatrix::identity(13, 13))) < 1e-14);
    }

    #[test]
    fn z_is_a_weighted_shift() {
        let h = 0.7;
        let t = scalar_toeplitz(&scalar_sym(PolySymbol::var(1, 0), 0.0), h, 10).unwrap();
        for l in 0..=10 {
            for k in 0..=10 {
                let expected = if l == k + 1 { ((k + 1) as f64 * h).sqrt() } else { 0.0 };
                assert!((t.matrix[(l, k)] - expected).norm() < 1e-14, "({l},{k})");
            }
        }
        let shift = shift_operator(Domain::Normal, 1, h, 10).unwrap();
        assert!(t.max_abs_diff(&shift).unwrap() < 1e-14);
    }

    #[test]
    fn norm_example_eigenvalues_are_exact() {
        for n in 1..=2usize {
            let sym = WeightedSymbol::new(SymmetricSymbol::<BigRational>::product_of_moduli(n), BigRational::from_integer(1.into())).unwrap();
            let h = BigRational::from_ratio(2, 7);
            for k in 0..=10u32 {
                let got = toeplitz_coefficient_exact(&sym, &h, k, k);
                let mut expected = BigRational::from_integer((k as i64 + 1).into());
                for _ in 0..n {
                    expected = expected * h.clone();
                }
                let q = BigRational::from_integer(1.into()) + h.clone();
                for _ in 0..(2 * n as u32 + k) {
                    expected = expected / q.clone();
                }
                assert_eq!(got, Complex::new(expected, BigRational::zero()));
                assert!(toeplitz_coefficient_exact(&sym, &h, k + 1, k).is_zero());
            }
        }
    }

    #[test]
    fn hermitian_symbol_gives_hermitian_matrix() {
        let z = PolySymbol::<f64>::var(2, 0);
        let w = PolySymbol::<f64>::var(2, 1);
        let base = &(&z * &w.conj()) + &(&w * &z.conj());
        let base = &base + &(&(&z * &z.conj()) * &PolySymbol::constant(2, c(3.0, 0.0)));
        let sym = WeightedSymbol::new(SymmetricSymbol::new(base).unwrap(), 0.5).unwrap();
        let t = normal_domain_toeplitz(&sym, 0.4, 15).unwrap();
        assert!(t.hermitian_residual() < 1e-10);
    }

    #[test]
    fn coherent_norm_matches_kernel() {
        let x = DMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(0.5, 0.0), c(-0.2, 0.4), c(0.1, -0.3)]);
        let chi = DVector::from_vec(vec![c(0.6, 0.2), c(-0.1, 0.7)]);
        for domain in [Domain::Full, Domain::Normal] {
            let v = coherent_vector(domain, &x, &chi, 0.5, 40).unwrap();
            let k = kernel(domain, &x, &x, 0.5, 1e-16).unwrap().value;
            let expected = (chi.adjoint() * k * &chi)[(0, 0)].re;
            assert!((v.norm_sqr() - expected).abs() < 1e-12 * expected, "{}", domain.name());
        }
    }

    #[test]
    fn identity_transforms_to_identity() {
        let x = DMatrix::from_row_slice(2, 2, &[c(0.4, 0.2), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.1)]);
        for domain in [Domain::Full, Domain::Normal] {
            let t = TruncatedOperator::identity(domain, 2, 0.5, 30).unwrap();
            let b = berezin_of_operator(&t, &x, true).unwrap();
            assert!(max_abs_c64(&(b.value - DMatrix::identity(2, 2))) < 1e-12);
        }
    }

    #[test]
    fn strict_mode_rejects_short_cutoff() {
        let x = DMatrix::from_row_slice(1, 1, &[c(2.0, 0.0)]);
        let t = TruncatedOperator::identity(Domain::Normal, 1, 0.1, 20).unwrap();
        assert!(matches!(berezin_of_operator(&t, &x, true), Err(Error::TruncationInadequate { .. })));
        assert!(!berezin_of_operator(&t, &x, false).unwrap().adequate);
    }

    #[test]
    fn multiplier_transform_on_full_domain() {
        // T_Z is multiplication by Z, so its transform is K^{-1/2} X K^{1/2}
        let h = 0.5;
        let x = DMatrix::from_row_slice(2, 2, &[c(0.2, 0.1), c(0.6, 0.0), c(0.0, 0.0), c(-0.3, 0.2)]);
        let t = shift_operator(Domain::Full, 2, h, 40).unwrap();
        let b = berezin_of_operator(&t, &x, true).unwrap().value;
        let k = kernel(Domain::Full, &x, &x, h, 1e-16).unwrap().value;
        let expected = hermitian_inv_sqrt(&k).unwrap() * &x * crate::linalg::hermitian_sqrt(&k);
        assert!(max_abs_c64(&(b - expected)) < 1e-10);
    }

    #[test]
    fn full_domain_toeplitz_of_identity_symbol() {
        let t = full_domain_toeplitz(&MatrixPoly::<BigRational>::identity(2, 4), 0.5, 3).unwrap();
        assert!(max_abs_c64(&(&t.matrix - DMatrix::identity(8, 8))) < 1e-14);
    }

    #[test]
    fn full_domain_toeplitz_of_z_is_the_shift() {
        let t = full_domain_toeplitz(&MatrixPoly::<BigRational>::coordinate(2), 0.5, 3).unwrap();
        let s = shift_operator(Domain::Full, 2, 0.5, 3).unwrap();
        assert!(t.max_abs_diff(&s).unwrap() < 1e-14);
    }
}
