//! Moment constants `c_k`, reproducing kernels on the full and normal
//! matrix domains, and the exact moment identities behind them.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hpoly::HPolynomial;
use crate::linalg::{max_abs_c64, CMatrix};
use crate::measures::{haar_conjugation_average, wick_moment_h, wick_moment_matrix_h, GaussianSpec};
use crate::scalar::{factorial_big, Scalar};
use crate::symcalc::{MatrixPoly, PolySymbol};

/// Hard cap on kernel series length.
pub const MAX_KERNEL_TERMS: usize = 500;
/// Largest `k!·N^k` the combinatorial count will enumerate.
pub const COMBINATORIAL_GUARD: u128 = 1_000_000_000;

/// Which matrix domain a kernel or operator lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// All of `C^{N×N}` with the Ginibre measure.
    Full,
    /// Normal matrices with the measure `μ_h` built from Haar and Gaussian eigenvalues.
    Normal,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Full => "full",
            Domain::Normal => "normal",
        }
    }
}

fn rising(n: i64, k: u32, sign: i64) -> BigInt {
    (1..=k as i64 + 1).fold(BigInt::one(), |acc, j| acc * BigInt::from(n + sign * j))
}

/// `c_k = [Π_{j=1}^{k+1}(N+j) − Π_{j=1}^{k+1}(N−j)] / ((k+1)(k+2))`.
pub fn c_k_formula(n: u32, k: u32) -> BigInt {
    let num = rising(n as i64, k, 1) - rising(n as i64, k, -1);
    let den = BigInt::from((k as u64 + 1) * (k as u64 + 2));
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// The two-branch factorial form of `c_k`, split at `k = N − 1`.
///
/// For `k < N − 1` the subtracted term is `Π_{j=1}^{k+1}(N−j) / ((k+1)(k+2))
/// = (N−1)! / ((k+1)(k+2)(N−k−2)!)`.
pub fn c_k_case_split(n: u32, k: u32) -> BigRational {
    let d = BigInt::from((k as u64 + 1) * (k as u64 + 2));
    let head = BigRational::new(factorial_big(k + n + 1), factorial_big(n) * &d);
    if k + 1 >= n {
        head
    } else {
        head - BigRational::new(factorial_big(n - 1), d * factorial_big(n - k - 2))
    }
}

/// `c_k` on the full domain, `k!` on the normal domain.
pub fn basis_norm(domain: Domain, n: u32, k: u32) -> BigInt {
    match domain {
        Domain::Full => c_k_formula(n, k),
        Domain::Normal => factorial_big(k),
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Counts triples `(μ, i, j)` with `μ ∈ S_k`, `i, j ∈ [N]^k`,
/// `j = (a, i_1, …, i_{k−1})`, `j∘μ = (i_{μ(2)}, …, i_{μ(k)}, b)` and
/// `i_k = i_{μ(1)}`, at `a = b`.
pub fn c_k_combinatorial(n: u32, k: u32) -> Result<BigInt> {
    let work = (1..=k as u128).product::<u128>().saturating_mul((n as u128).saturating_pow(k));
    if work > COMBINATORIAL_GUARD {
        return Err(Error::ResourceGuard { size: work });
    }
    if k == 0 {
        return Ok(BigInt::one());
    }
    let (k, n) = (k as usize, n as usize);
    let a = 0usize;
    let mut count: u64 = 0;
    let mut mu: Vec<usize> = (0..k).collect();
    loop {
        let mut i = vec![0usize; k];
        loop {
            let j = |t: usize| if t == 0 { a } else { i[t - 1] };
            let ok = i[k - 1] == i[mu[0]] && (0..k - 1).all(|t| j(mu[t]) == i[mu[t + 1]]) && j(mu[k - 1]) == a;
            if ok {
                count += 1;
            }
            let mut pos = 0;
            while pos < k {
                i[pos] += 1;
                if i[pos] < n {
                    break;
                }
                i[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        if !next_permutation(&mut mu) {
            break;
        }
    }
    Ok(BigInt::from(count))
}

/// Truncated kernel value.
#[derive(Clone, Debug)]
pub struct KernelEval {
    pub domain: Domain,
    pub h: f64,
    pub n: usize,
    /// Highest power of `X` kept.
    pub cutoff: usize,
    pub value: DMatrix<Complex64>,
}

/// `norm_k / norm_{k−1}` as a float.
pub(crate) fn norm_ratio(domain: Domain, n: u32, k: u32) -> f64 {
    match domain {
        Domain::Normal => k as f64,
        Domain::Full => ToPrimitive::to_f64(&BigRational::new(c_k_formula(n, k), c_k_formula(n, k - 1))).unwrap_or(f64::INFINITY),
    }
}

fn is_idempotent(x: &DMatrix<Complex64>) -> bool {
    max_abs_c64(&(x * x - x)) <= 1e-12 * max_abs_c64(x).max(1.0)
}

/// Smallest `m ≤ N` with `X^m = 0`, if any.
fn nilpotency_index(x: &DMatrix<Complex64>) -> Option<usize> {
    let scale = max_abs_c64(x).max(1.0);
    let mut p = x.clone();
    for m in 1..=x.nrows() {
        if max_abs_c64(&p) <= 1e-12 * scale.powi(m as i32) {
            return Some(m);
        }
        p = &p * x;
    }
    None
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveH(h));
    }
    Ok(())
}

fn series(domain: Domain, x: &DMatrix<Complex64>, y: &DMatrix<Complex64>, h: f64, tol: f64, max_terms: usize) -> Result<KernelEval> {
    let n = x.nrows();
    let ys = y.adjoint();
    let mut a = DMatrix::<Complex64>::identity(n, n);
    let mut b = DMatrix::<Complex64>::identity(n, n);
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut small = 0;
    for k in 1..max_terms {
        let s = Complex64::new((h * norm_ratio(domain, n as u32, k as u32)).sqrt().recip(), 0.0);
        a = &a * x * s;
        b = &b * &ys * s;
        let term = &a * &b;
        sum += &term;
        if !sum.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NoConvergence { terms: k });
        }
        if max_abs_c64(&term) <= tol * max_abs_c64(&sum).max(1.0) {
            small += 1;
            if small == 3 {
                return Ok(KernelEval {
                    domain,
                    h,
                    n,
                    cutoff: k,
                    value: sum,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { terms: max_terms })
}

/// `K_h(X, Y) = Σ X^k Y^{*k} / (norm_k h^k)`, truncated once three consecutive
/// terms fall below `tol` relative to the partial sum. Nilpotent `X` gives a
/// finite sum; idempotent `X` uses `(I − X) + X K_h(I, Y)`.
pub fn kernel(domain: Domain, x: &DMatrix<Complex64>, y: &DMatrix<Complex64>, h: f64, tol: f64) -> Result<KernelEval> {
    check_h(h)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let n = x.nrows();
    if x.shape() != y.shape() || x.ncols() != n {
        return Err(Error::ShapeMismatch(format!("X is {:?}, Y is {:?}", x.shape(), y.shape())));
    }
    if let Some(m) = nilpotency_index(x) {
        let ys = y.adjoint();
        let mut sum = DMatrix::<Complex64>::identity(n, n);
        let (mut a, mut b) = (sum.clone(), sum.clone());
        for k in 1..m {
            let s = Complex64::new((h * norm_ratio(domain, n as u32, k as u32)).sqrt().recip(), 0.0);
            a = &a * x * s;
            b = &b * &ys * s;
            sum += &a * &b;
        }
        return Ok(KernelEval {
            domain,
            h,
            n,
            cutoff: m - 1,
            value: sum,
        });
    }
    if is_idempotent(x) {
        let id = DMatrix::<Complex64>::identity(n, n);
        let inner = series(domain, &id, y, h, tol, MAX_KERNEL_TERMS)?;
        let value = (&id - x) + x * &inner.value;
        return Ok(KernelEval {
            domain,
            h,
            n,
            cutoff: inner.cutoff,
            value,
        });
    }
    series(domain, x, y, h, tol, MAX_KERNEL_TERMS)
}

/// `∫ Z^{*l} Z^k dμ_h` as an exact polynomial in `h`, computed by Wick pairing
/// (full domain) or the Haar trace average plus eigenvalue moments (normal domain).
pub fn domain_moment<S: Scalar>(domain: Domain, n: usize, l: u32, k: u32) -> Result<HPolynomial<CMatrix<S>>> {
    match domain {
        Domain::Full => {
            let y = MatrixPoly::<S>::coordinate(n);
            let p = &y.adjoint().pow(l) * &y.pow(k);
            wick_moment_matrix_h(&GaussianSpec::centered_iid(n * n), &p)
        }
        Domain::Normal => {
            // Z = U D U*: Z^{*l} Z^k = U D̄^l D^k U*, and ∫ U A U* dU = Tr(A)/N · I
            let spec = GaussianSpec::centered_iid(n);
            let per_eigenvalue = (0..n)
                .map(|m| wick_moment_h(&spec, &(&PolySymbol::<S>::conj_var(n, m).pow(l) * &PolySymbol::var(n, m).pow(k))))
                .collect::<Result<Vec<_>>>()?;
            let top = per_eigenvalue.iter().filter_map(HPolynomial::degree).max().unwrap_or(0);
            let coeffs = (0..=top)
                .map(|p| haar_conjugation_average(&CMatrix::from_diag(&per_eigenvalue.iter().map(|e| e.coeff(p)).collect::<Vec<_>>())))
                .collect();
            Ok(HPolynomial::from_coeffs(CMatrix::zeros(n), coeffs))
        }
    }
}

/// Gram matrix of the orthonormal basis `Z^k χ_j / √(norm_k h^k)` for `k ≤ kmax`,
/// as blocks `(l, k)`; each block is an exact `HPolynomial` that should equal
/// `δ_lk I`.
pub fn gram_blocks<S: Scalar>(domain: Domain, n: usize, kmax: u32) -> Result<Vec<Vec<HPolynomial<CMatrix<S>>>>> {
    (0..=kmax)
        .map(|l| {
            (0..=kmax)
                .map(|k| {
                    let m = domain_moment::<S>(domain, n, l, k)?;
                    // divide by √(norm_l h^l) √(norm_k h^k); nonzero only for l = k
                    if m.is_zero() {
                        return Ok(m);
                    }
                    let norm = S::from_bigint(&basis_norm(domain, n as u32, k));
                    Ok(m.shift(-(k as i32)).scale(&Complex::new(S::one() / norm, S::zero())))
                })
                .collect()
        })
        .collect()
}

/// `∫ K_h(X, Y) Y^k dμ_h(Y)` for the truncated series `m ≤ cutoff`, exact in `h`.
/// Equals `X^k` whenever `cutoff ≥ k`.
pub fn reproduce_monomial<S: Scalar>(domain: Domain, x: &CMatrix<S>, k: u32, cutoff: u32) -> Result<HPolynomial<CMatrix<S>>> {
    let n = x.n();
    let mut acc = HPolynomial::zero(CMatrix::zeros(n));
    for m in 0..=cutoff {
        let mom = domain_moment::<S>(domain, n, m, k)?;
        if mom.is_zero() {
            continue;
        }
        let norm = S::from_bigint(&basis_norm(domain, n as u32, m));
        let xm = x.pow(m).scale(&Complex::new(S::one() / norm, S::zero()));
        let term = HPolynomial::constant(xm).mul(&mom).shift(-(m as i32));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Weights `w_j` of `dν_N = (1/π) Σ_{j<N} w_j |z|^{2j} e^{−|z|²} dz`, namely
/// `w_j = (N−1)!(N−j) / (N! j!) = (N−j) / (N j!)`.
pub fn nu_n_weights(n: u32) -> Vec<BigRational> {
    (0..n)
        .map(|j| BigRational::new(BigInt::from(n - j), BigInt::from(n) * factorial_big(j)))
        .collect()
}

/// `∫_C |z|^{2k} dν_N` against `Π_{j=1}^{k+1}(N+j) / ((k+1)(k+2))`.
pub fn nu_n_moment_check(n: u32, k: u32) -> (BigRational, BigRational) {
    // ∫ |z|^{2(k+j)} e^{−|z|²} dz / π = (k+j)!
    let lhs = nu_n_weights(n).into_iter().enumerate().fold(BigRational::zero(), |acc, (j, w)| {
        acc + w * BigRational::from_integer(factorial_big(k + j as u32))
    });
    let rhs = BigRational::new(rising(n as i64, k, 1), BigInt::from((k as u64 + 1) * (k as u64 + 2)));
    (lhs, rhs)
}

/// `{Π_{j=1}^{k+1}(N−j) / ((k+1)(k+2))}_{k=1..=kmax}`.
pub fn tail_sequence(n: u32, kmax: u32) -> Vec<BigRational> {
    (1..=kmax)
        .map(|k| BigRational::new(rising(n as i64, k, -1), BigInt::from((k as u64 + 1) * (k as u64 + 2))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::scalar::c_int;
    use num_rational::BigRational;

    #[test]
    fn c_k_spot_values() {
        for n in 1..=5u32 {
            assert_eq!(c_k_formula(n, 0), BigInt::one());
            assert_eq!(c_k_formula(n, 1), BigInt::from(n));
            assert_eq!(c_k_formula(n, 2), BigInt::from(n * n + 1));
        }
    }

    #[test]
    fn case_split_agrees_with_bracket_formula() {
        for n in 1..=6u32 {
            for k in 0..10u32 {
                assert_eq!(c_k_case_split(n, k), BigRational::from_integer(c_k_formula(n, k)), "N={n} k={k}");
            }
        }
    }

    #[test]
    fn combinatorial_examples() {
        assert_eq!(c_k_combinatorial(3, 0).unwrap(), BigInt::one());
        assert_eq!(c_k_combinatorial(2, 2).unwrap(), BigInt::from(5));
        assert_eq!(c_k_combinatorial(3, 4).unwrap(), c_k_formula(3, 4));
        assert_eq!(c_k_combinatorial(2, 3).unwrap(), c_k_formula(2, 3));
        assert!(matches!(c_k_combinatorial(4, 12), Err(Error::ResourceGuard { .. })));
    }

    #[test]
    fn laplacian_power_of_moment_matrix() {
        // Δ^k (Y^{*k} Y^k) = k! c_k I
        let n = 2;
        for k in 0..=3u32 {
            let y = MatrixPoly::<BigRational>::coordinate(n);
            let p = &y.adjoint().pow(k) * &y.pow(k);
            let got = p.laplacian_all(k).at_zero();
            let expect = CMatrix::identity(n).scale(&Complex::new(
                BigRational::from_integer(factorial_big(k) * c_k_formula(n as u32, k)),
                BigRational::zero(),
            ));
            assert_eq!(got, expect);
        }
    }

    fn cm(rows: &[[f64; 4]]) -> DMatrix<Complex64> {
        DMatrix::from_fn(2, 2, |i, j| Complex64::new(rows[i][2 * j], rows[i][2 * j + 1]))
    }

    #[test]
    fn nilpotent_closed_form() {
        let x = cm(&[[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0]]);
        let y = cm(&[[0.3, 0.1, -0.2, 0.5], [1.1, 0.0, 0.4, -0.7]]);
        let h = 0.37;
        let k = kernel(Domain::Full, &x, &y, h, 1e-15).unwrap();
        let expect = DMatrix::identity(2, 2) + &x * y.adjoint() / Complex64::new(2.0 * h, 0.0);
        assert!(max_abs_c64(&(k.value - expect)) < 1e-15);
    }

    #[test]
    fn projection_closed_form() {
        let x = cm(&[[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]]);
        let h = 0.5;
        let k = kernel(Domain::Normal, &x, &x, h, 1e-15).unwrap();
        assert!((k.value[(0, 0)] - Complex64::new((1.0 / h).exp(), 0.0)).norm() < 1e-12 * (1.0 / h).exp());
        assert!((k.value[(1, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(k.value[(0, 1)].norm() < 1e-14);
        let y = cm(&[[0.3, 0.1, -0.2, 0.5], [1.1, 0.0, 0.4, -0.7]]);
        let generic = series(Domain::Normal, &x, &y, h, 1e-16, MAX_KERNEL_TERMS).unwrap();
        let closed = kernel(Domain::Normal, &x, &y, h, 1e-16).unwrap();
        assert!(max_abs_c64(&(generic.value - closed.value)) < 1e-12);
    }

    #[test]
    fn kernel_is_hermitian_and_positive() {
        let xs = [
            cm(&[[0.3, 0.1, -0.2, 0.5], [1.1, 0.0, 0.4, -0.7]]),
            cm(&[[-1.0, 0.2, 0.0, 0.0], [0.5, 0.5, 0.9, 0.1]]),
        ];
        for d in [Domain::Full, Domain::Normal] {
            let kxy = kernel(d, &xs[0], &xs[1], 0.8, 1e-15).unwrap().value;
            let kyx = kernel(d, &xs[1], &xs[0], 0.8, 1e-15).unwrap().value;
            assert!(max_abs_c64(&(kxy.adjoint() - kyx)) < 1e-12);
            for x in &xs {
                let kxx = kernel(d, x, x, 0.8, 1e-15).unwrap().value;
                assert!(hermitian_eigenvalues(&kxx).into_iter().all(|e| e >= -1e-12));
            }
        }
    }

    #[test]
    fn kernel_rejects_bad_input() {
        let x = DMatrix::<Complex64>::identity(2, 2);
        assert!(matches!(kernel(Domain::Full, &x, &x, 0.0, 1e-12), Err(Error::NonPositiveH(_))));
        assert!(kernel(Domain::Full, &x, &x, 1.0, 0.0).is_err());
        let big = x * Complex64::new(1e3, 0.0);
        assert!(matches!(
            kernel(Domain::Normal, &cm(&[[0.5, 0.0, 1.0, 0.0], [0.0, 0.0, 0.3, 0.0]]), &big, 1e-3, 1e-16),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn gram_matrix_is_identity() {
        for d in [Domain::Full, Domain::Normal] {
            let blocks = gram_blocks::<BigRational>(d, 2, 4).unwrap();
            for (l, row) in blocks.iter().enumerate() {
                for (k, b) in row.iter().enumerate() {
                    if l == k {
                        assert_eq!(b, &HPolynomial::constant(CMatrix::identity(2)), "{d:?} block {l}");
                    } else {
                        assert!(b.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn reproducing_property_on_monomials() {
        let x = CMatrix::from_rows(vec![
            vec![c_int::<BigRational>(1), c_int(2)],
            vec![c_int(-1), Complex::new(BigRational::zero(), BigRational::one())],
        ]);
        for d in [Domain::Full, Domain::Normal] {
            for k in 0..=3 {
                assert_eq!(reproduce_monomial(d, &x, k, 4).unwrap(), HPolynomial::constant(x.pow(k)));
            }
        }
    }

    #[test]
    fn nu_moments_and_tail() {
        for n in 1..=4u32 {
            for k in 0..=10u32 {
                let (l, r) = nu_n_moment_check(n, k);
                assert_eq!(l, r, "N={n} k={k}");
            }
            let nonzero = tail_sequence(n, 10).iter().filter(|t| !t.is_zero()).count();
            assert_eq!(nonzero, n.saturating_sub(2) as usize);
        }
    }
}
