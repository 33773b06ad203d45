//! Full-domain transforms at the nilpotent point `X = [[0,1],[0,0]]`: exact
//! Laurent numerators evaluated on an `h` grid and extrapolated to `h → 0`.

use btq_core::linalg::CMatrix;
use btq_core::random::random_matrix_poly;
use btq_core::scalar::{c_int, cr};
use btq_core::symcalc::{entry_var, MatrixPoly, PolySymbol};
use btq_core::toeplitz::{
    berezin_full_domain, berezin_full_domain_product, double_integral_exact, double_integral_prediction, extrapolate_to_zero, fit_power_law, FullDomainBerezin,
};
use btq_core::{Scalar, Q};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{rng, to_dmatrix};
use crate::result::{enc_cmatrix, enc_matrix, ExperimentResult, Fit};

const N: usize = 2;
const LIMIT_TOL: f64 = 1e-3;

fn nilpotent() -> CMatrix<Q> {
    CMatrix::from_rows(vec![vec![c_int(0), c_int(1)], vec![c_int(0), c_int(0)]])
}

fn extrapolation_degree(points: usize) -> usize {
    3.min(points - 1)
}

/// Entrywise extrapolation of `h ↦ B(h)` to `h = 0` in `t = √h`.
fn limit<S: Scalar>(r: &mut ExperimentResult, label: &str, b: &FullDomainBerezin<S>, hs: &[f64]) -> anyhow::Result<DMatrix<Complex64>> {
    let values = hs.iter().map(|&h| b.eval(h)).collect::<Result<Vec<_>, _>>()?;
    for (h, v) in hs.iter().zip(&values) {
        r.sweep_matrix(label, *h, v);
    }
    let ts: Vec<f64> = hs.iter().map(|h| h.sqrt()).collect();
    let deg = extrapolation_degree(hs.len());
    let mut out = DMatrix::zeros(N, N);
    for i in 0..N {
        for j in 0..N {
            let re: Vec<f64> = values.iter().map(|v| v[(i, j)].re).collect();
            let im: Vec<f64> = values.iter().map(|v| v[(i, j)].im).collect();
            out[(i, j)] = Complex64::new(extrapolate_to_zero(&ts, &re, deg)?, extrapolate_to_zero(&ts, &im, deg)?);
        }
    }
    Ok(out)
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn thm_4_1(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let hs = cfg.h_grid();
    let x = nilpotent();
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut cases = Vec::new();
    for s in 0..5 {
        let phi = random_matrix_poly(&mut rng, N, 2, 3);
        let b = berezin_full_domain(&phi, &x)?;
        let got = limit(&mut r, &format!("phi{s}"), &b, &hs)?;
        let p0 = phi.at_zero();
        let avg = (p0.get(0, 0) + p0.get(1, 1)) * cr::<Q>(1, 2);
        let expected = to_dmatrix(&CMatrix::from_rows(vec![vec![avg, c_int(0)], vec![c_int(0), p0.get(1, 1).clone()]]));
        let err = max_diff(&got, &expected);
        worst = worst.max(err);
        cases.push(json!({"phi_at_zero": enc_cmatrix(&p0), "limit": enc_matrix(&got), "expected": enc_matrix(&expected), "error": err}));
    }
    r.put("limits", json!(cases));
    r.assert("limit_matches_compressed_value", worst <= LIMIT_TOL, format!("largest entry error {worst:.2e}"));

    // φ = √2 y₂₂ I: the (1,2) entry vanishes like √h
    let y22 = PolySymbol::<f64>::var(N * N, entry_var(N, 1, 1)).scale(&Complex64::new(2f64.sqrt(), 0.0));
    let phi = MatrixPoly::scalar(N, &y22);
    let b = berezin_full_domain(&phi, &nilpotent().map(Scalar::to_f64))?;
    let entries: Vec<f64> = hs.iter().map(|&h| b.eval(h).map(|m| m[(0, 1)].norm())).collect::<Result<_, _>>()?;
    for (h, v) in hs.iter().zip(&entries) {
        r.sweep.push(crate::result::SweepRow {
            h: *h,
            entry: "sqrt2_y22[1,2]".into(),
            re: *v,
            im: 0.0,
        });
    }
    let fit = fit_power_law(&hs, &entries)?;
    let ts: Vec<f64> = hs.iter().map(|h| h.sqrt()).collect();
    let scaled: Vec<f64> = entries.iter().zip(&hs).map(|(v, h)| v / h.sqrt()).collect();
    let coefficient = extrapolate_to_zero(&ts, &scaled, extrapolation_degree(hs.len()))?;
    r.fits.insert("sqrt2_y22_entry_12".into(), Fit::from(fit));
    r.put("sqrt2_y22_coefficient_limit", json!(coefficient));
    r.assert(
        "half_integer_exponent",
        (fit.exponent - 0.5).abs() <= 0.02,
        format!("exponent {:.4}, R² {:.6}", fit.exponent, fit.r_squared),
    );
    r.assert(
        "unit_coefficient",
        (coefficient - 1.0).abs() <= LIMIT_TOL,
        format!("coefficient → {coefficient:.6}"),
    );
    Ok(r)
}

pub fn thm_4_2(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let hs = cfg.h_grid();
    let x = nilpotent();
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut cases = Vec::new();
    for s in 0..5 {
        let phi = random_matrix_poly(&mut rng, N, 2, 3);
        let psi = random_matrix_poly(&mut rng, N, 2, 3);
        let b = berezin_full_domain_product(&phi, &psi, &x)?;
        let got = limit(&mut r, &format!("pair{s}"), &b, &hs)?;
        let (p0, q0) = (phi.at_zero(), psi.at_zero());
        let corner = p0.trace() * q0.trace() * cr::<Q>(1, 4);
        let pq = &p0 * &q0;
        let expected = to_dmatrix(&CMatrix::from_rows(vec![vec![corner, c_int(0)], vec![c_int(0), pq.get(1, 1).clone()]]));
        let err = max_diff(&got, &expected);
        worst = worst.max(err);
        cases.push(json!({"limit": enc_matrix(&got), "expected": enc_matrix(&expected), "error": err}));
    }
    r.put("limits", json!(cases));
    r.assert("product_limit_matches", worst <= LIMIT_TOL, format!("largest entry error {worst:.2e}"));
    Ok(r)
}

pub fn lemma_4_3(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(N);
    let mut rng = rng(seed);
    let mut worst = [0.0f64; 2];
    let mut exact = true;
    for _ in 0..10 {
        let phi = random_matrix_poly(&mut rng, n, 2, 3);
        let psi = random_matrix_poly(&mut rng, n, 2, 3);
        let series = double_integral_exact(&phi, &psi)?;
        let predicted = double_integral_prediction(&phi, &psi)?;
        for (k, p) in predicted.iter().enumerate() {
            let c = series.coeff(k as i32);
            exact &= c == *p;
            worst[k] = worst[k].max(max_diff(&to_dmatrix(&c), &to_dmatrix(p)));
        }
    }
    r.put("max_error_h0", json!(worst[0]));
    r.put("max_error_h1", json!(worst[1]));
    r.assert("order_zero", worst[0] <= 1e-12, format!("{:.2e}", worst[0]));
    r.assert("order_one", worst[1] <= 1e-12, format!("{:.2e}", worst[1]));
    r.put("exact_equality", json!(exact));
    Ok(r)
}
