//! Monte Carlo evaluation of normal-domain Berezin transforms at the points
//! `P = diag(1, 0, …, 0)`, `I` and `0`, sharing one set of samples so that the
//! entrywise identities between them can be checked to rounding precision.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measures::{flatten_matrix, mc_integrate, sample_normal_mu_h, HaarSample, McEstimate};
use crate::symcalc::MatrixPoly;

/// `K(diag(x), Y)` for normal `Y = U D U*` in closed form:
/// row `i` is row `i` of `U diag_l(e^{x_i d̄_l / h}) U*`.
pub fn kernel_diag_normal(x: &[f64], u: &DMatrix<Complex64>, d: &[Complex64], h: f64) -> DMatrix<Complex64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|l| (d[l].conj() * (x[i] / h)).exp() * u[(i, l)] * u[(j, l)].conj()).sum()
    })
}

/// `K(Y, Z)` for normal `Y = U D U*`, `Z = W E W*`:
/// `U [(U*W)_{ab} e^{d_a ē_b / h}] W*`.
pub fn kernel_normal_pair(y: (&DMatrix<Complex64>, &[Complex64]), z: (&DMatrix<Complex64>, &[Complex64]), h: f64) -> DMatrix<Complex64> {
    let (u, d) = y;
    let (w, e) = z;
    let inner = u.adjoint() * w;
    let n = d.len();
    let m = DMatrix::from_fn(n, n, |a, b| inner[(a, b)] * (d[a] * e[b].conj() / h).exp());
    u * m * w.adjoint()
}

fn point_diagonals(n: usize) -> [Vec<f64>; 3] {
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    [p, vec![1.0; n], vec![0.0; n]]
}

/// `K(X,X)^{-1/2}` for real diagonal `X`.
fn normalizer(x: &[f64], h: f64) -> DVector<Complex64> {
    DVector::from_iterator(x.len(), x.iter().map(|v| Complex64::new((-v * v / (2.0 * h)).exp(), 0.0)))
}

fn normalize(m: &DMatrix<Complex64>, s: &DVector<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| s[i] * m[(i, j)] * s[j])
}

/// Entry comparisons at `P`, `I` and `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlocalCheck {
    pub n: usize,
    pub h: f64,
    pub samples: usize,
    /// MC means of the transforms at `P`, `I` and `0`.
    pub at_projection: DMatrix<Complex64>,
    pub at_identity: DMatrix<Complex64>,
    pub at_zero: DMatrix<Complex64>,
    /// Largest standard error over all estimated entries.
    pub max_std_err: f64,
    /// `|[·(P)]_{11} − [·(I)]_{11}|` relative to their size.
    pub rel_err_first: f64,
    /// Largest `|[·(P)]_{jj} − [·(0)]_{jj}|` over `j ≥ 2`, relative.
    pub rel_err_rest: f64,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn unflatten(n: usize, v: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        let idx = 2 * (j * n + i);
        Complex64::new(v[idx], v[idx + 1])
    })
}

fn summarize(n: usize, h: f64, est: McEstimate) -> NonlocalCheck {
    let block = 2 * n * n;
    let at_projection = unflatten(n, &est.mean[..block]);
    let at_identity = unflatten(n, &est.mean[block..2 * block]);
    let at_zero = unflatten(n, &est.mean[2 * block..]);
    let rel_err_first = rel(at_projection[(0, 0)], at_identity[(0, 0)]);
    let rel_err_rest = (1..n).map(|j| rel(at_projection[(j, j)], at_zero[(j, j)])).fold(0.0, f64::max);
    let max_std_err = est.std_err.iter().copied().fold(0.0, f64::max);
    NonlocalCheck {
        n,
        h,
        samples: est.samples,
        at_projection,
        at_identity,
        at_zero,
        max_std_err,
        rel_err_first,
        rel_err_rest,
    }
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveH(h));
    }
    Ok(())
}

fn check_symbol(phi: &MatrixPoly<f64>) -> Result<()> {
    let n = phi.n();
    if phi.nvars() != n * n {
        return Err(Error::NvarsMismatch {
            left: phi.nvars(),
            right: n * n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("the comparison needs N ≥ 2".into()));
    }
    Ok(())
}

fn eval_at(phi: &MatrixPoly<f64>, z: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = z.nrows();
    let point: Vec<Complex64> = (0..n * n).map(|v| z[(v / n, v % n)]).collect();
    phi.eval_c64(&point).to_c64()
}

/// `W̃T_φ` at `P`, `I`, `0` from shared samples of `μ_h`.
pub fn nonlocal_single(phi: &MatrixPoly<f64>, h: f64, samples: usize, seed: u64) -> Result<NonlocalCheck> {
    check_symbol(phi)?;
    let n = phi.n();
    check_h(h)?;
    let points = point_diagonals(n);
    let sampler = |rng: &mut ChaCha8Rng| sample_normal_mu_h(n, h, rng).expect("h checked above");
    let integrand = |(u, d): &(HaarSample, Vec<Complex64>)| -> Vec<f64> {
        let y = crate::measures::assemble_normal(&u.u, d);
        let f = eval_at(phi, &y);
        points
            .iter()
            .flat_map(|x| {
                let k = kernel_diag_normal(x, &u.u, d, h);
                flatten_matrix(&normalize(&(&k * &f * k.adjoint()), &normalizer(x, h)))
            })
            .collect()
    };
    Ok(summarize(n, h, mc_integrate(sampler, integrand, samples, seed)?))
}

/// `W̃(T_φ T_ψ)` at `P`, `I`, `0` from shared pairs `(Y, Z)` of samples.
pub fn nonlocal_product(phi: &MatrixPoly<f64>, psi: &MatrixPoly<f64>, h: f64, samples: usize, seed: u64) -> Result<NonlocalCheck> {
    check_symbol(phi)?;
    check_symbol(psi)?;
    let n = phi.n();
    if psi.n() != n {
        return Err(Error::ShapeMismatch(format!("φ is {n}x{n}, ψ is {}x{}", psi.n(), psi.n())));
    }
    check_h(h)?;
    let points = point_diagonals(n);
    let sampler = |rng: &mut ChaCha8Rng| {
        let y = sample_normal_mu_h(n, h, rng).expect("h checked above");
        (y, sample_normal_mu_h(n, h, rng).expect("h checked above"))
    };
    type Pair = ((HaarSample, Vec<Complex64>), (HaarSample, Vec<Complex64>));
    let integrand = |((u, d), (w, e)): &Pair| -> Vec<f64> {
        let f = eval_at(phi, &crate::measures::assemble_normal(&u.u, d));
        let g = eval_at(psi, &crate::measures::assemble_normal(&w.u, e));
        let kyz = kernel_normal_pair((&u.u, d), (&w.u, e), h);
        let middle = &f * kyz * &g;
        points
            .iter()
            .flat_map(|x| {
                let kxy = kernel_diag_normal(x, &u.u, d, h);
                let kxz = kernel_diag_normal(x, &w.u, e, h);
                flatten_matrix(&normalize(&(&kxy * &middle * kxz.adjoint()), &normalizer(x, h)))
            })
            .collect()
    };
    Ok(summarize(n, h, mc_integrate(sampler, integrand, samples, seed)?))
}
