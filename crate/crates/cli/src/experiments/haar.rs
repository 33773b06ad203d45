//! Haar moment identities by Monte Carlo against their closed forms.

use btq_core::linalg::CMatrix;
use btq_core::measures::{
    flatten_complex, haar_column_fourth_moment, haar_conjugation_average, haar_second_moment, kappa, mc_integrate, sample_haar, MC_MIN_SAMPLES,
};
use btq_core::scalar::cx;
use btq_core::Q;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::to_dmatrix;
use crate::result::ExperimentResult;

const DEFAULT_SAMPLES: usize = 1_000_000;

/// Fixed non-normal test matrix for the conjugation average.
fn probe(n: usize) -> CMatrix<Q> {
    let q = |v: usize| Q::from_integer((v as i64).into());
    CMatrix::from_fn(n, |i, j| cx(q(i * n + j + 1), q((i + 2 * j) % 3)))
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
}

/// `[UXU*, u_ij ū_kl, u_a1 ū_j1 u_k1 ū_b1, Σ_l u_al ū_jl u_kl ū_bl]`, flattened.
fn integrand(u: &DMatrix<Complex64>, x: &DMatrix<Complex64>) -> Vec<f64> {
    let n = u.nrows();
    let conj = u * x * u.adjoint();
    let mut out: Vec<Complex64> = conj.iter().copied().collect();
    out.extend(quads(n).map(|(i, j, k, l)| u[(i, j)] * u[(k, l)].conj()));
    out.extend(quads(n).map(|(a, j, k, b)| u[(a, 0)] * u[(j, 0)].conj() * u[(k, 0)] * u[(b, 0)].conj()));
    out.extend(quads(n).map(|(a, j, k, b)| (0..n).map(|l| u[(a, l)] * u[(j, l)].conj() * u[(k, l)] * u[(b, l)].conj()).sum::<Complex64>()));
    flatten_complex(out)
}

fn targets(n: usize, x: &CMatrix<Q>) -> Vec<f64> {
    let avg = to_dmatrix(&haar_conjugation_average(x));
    let mut out: Vec<Complex64> = avg.iter().copied().collect();
    let re = |v: f64| Complex64::new(v, 0.0);
    out.extend(quads(n).map(|(i, j, k, l)| re(haar_second_moment::<f64>(n, i, j, k, l))));
    out.extend(quads(n).map(|(a, j, k, b)| re(haar_column_fourth_moment::<f64>(n, a, j, k, b))));
    out.extend(quads(n).map(|(a, j, k, b)| re(kappa::<f64>(n, a, j, k, b))));
    flatten_complex(out)
}

pub fn schur_haar(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let small = samples < DEFAULT_SAMPLES;
    let ns: Vec<usize> = match cfg.n {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    for n in ns {
        let x = probe(n);
        let xf = to_dmatrix(&x);
        let target = targets(n, &x);
        let name = format!("haar_moments_N{n}");
        if samples < MC_MIN_SAMPLES {
            r.assert_mc(name, false, true, format!("{samples} samples is below the minimum of {MC_MIN_SAMPLES}"));
            continue;
        }
        let est = mc_integrate(
            |rng| sample_haar(n, rng).u,
            |u| integrand(u, &xf),
            samples,
            btq_core::measures::mix_seed(seed, n as u64),
        )?;
        let worst = est.max_sigma(&target);
        r.put(
            format!("N{n}"),
            json!({"components": target.len(), "max_sigma": worst, "max_std_err": est.std_err.iter().copied().fold(0.0, f64::max)}),
        );
        r.assert_mc(
            name,
            est.within(&target, 4.0),
            small,
            format!("largest deviation {worst:.2}σ over {} components", target.len()),
        );
    }
    r.put("samples", json!(samples));
    Ok(r)
}
