//! Normal-domain transforms at `P = diag(1,0,…,0)` compared with `I` and `0`,
//! plus the two expansions available at a zero eigenvalue.

use btq_core::linalg::{CMatrix, SpectralForm};
use btq_core::measures::MC_MIN_SAMPLES;
use btq_core::scalar::c_int;
use btq_core::semiclassics::{asy_zero_expansion, tss_expansion};
use btq_core::symcalc::{MatrixPoly, PolySymbol, SymmetricSymbol};
use btq_core::toeplitz::{berezin_heat_exact, nonlocal_product, nonlocal_single, NonlocalCheck};
use btq_core::Q;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::result::{enc_matrix, enc_series, ExperimentResult};

const N: usize = 2;
const REL_TOL: f64 = 1e-12;
/// Grid points evaluated; smaller `h` underflows the normalizer at `X = I`.
const GRID_POINTS: usize = 3;

fn symbols(n: usize) -> (MatrixPoly<f64>, MatrixPoly<f64>) {
    let y = MatrixPoly::<f64>::coordinate(n);
    let phi = &(&y + &(&y.adjoint() * &y)) + &MatrixPoly::identity(n, n * n);
    let psi = &(&y.adjoint() * &y.adjoint()) + &y.scale(&num_complex::Complex64::new(0.0, 1.0));
    (phi, psi)
}

fn record(r: &mut ExperimentResult, label: &str, c: &NonlocalCheck) {
    r.put(
        label.to_string(),
        json!({
            "h": c.h,
            "at_projection": enc_matrix(&c.at_projection),
            "at_identity": enc_matrix(&c.at_identity),
            "at_zero": enc_matrix(&c.at_zero),
            "rel_err_first": c.rel_err_first,
            "rel_err_rest": c.rel_err_rest,
            "max_std_err": c.max_std_err,
        }),
    );
    let ok = c.rel_err_first <= REL_TOL && c.rel_err_rest <= REL_TOL;
    r.assert(
        format!("{label}_entry_identities"),
        ok,
        format!("first {:.2e}, rest {:.2e}", c.rel_err_first, c.rel_err_rest),
    );
}

fn grid(cfg: &ExperimentConfig) -> Vec<f64> {
    cfg.h_grid().into_iter().take(GRID_POINTS).collect()
}

fn samples(cfg: &ExperimentConfig, default: usize) -> Option<usize> {
    let s = cfg.samples.unwrap_or(default);
    (s >= MC_MIN_SAMPLES).then_some(s)
}

pub fn thm_5_1(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(N);
    let (phi, _) = symbols(n);
    match samples(cfg, 100_000) {
        Some(s) => {
            for (m, h) in grid(cfg).into_iter().enumerate() {
                let c = nonlocal_single(&phi, h, s, seed ^ m as u64)?;
                record(&mut r, &format!("h{m}"), &c);
            }
        }
        None => r.assert_mc("entry_identities", false, true, "too few samples"),
    }
    zero_eigenvalue_expansions(&mut r, n)?;
    Ok(r)
}

pub fn thm_5_2(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(N);
    let (phi, psi) = symbols(n);
    match samples(cfg, 50_000) {
        Some(s) => {
            for (m, h) in grid(cfg).into_iter().enumerate() {
                let c = nonlocal_product(&phi, &psi, h, s, seed ^ m as u64)?;
                record(&mut r, &format!("h{m}"), &c);
            }
        }
        None => r.assert_mc("entry_identities", false, true, "too few samples"),
    }
    Ok(r)
}

/// `φ = A·g` with `g` symmetric in all eigenvalues, at `X = 0`: the critical
/// point sum reproduces the exact value, the nonzero-eigenvalue formula does not
/// unless `A` is scalar.
fn zero_eigenvalue_expansions(r: &mut ExperimentResult, n: usize) -> anyhow::Result<()> {
    let modsq = |v: usize| &PolySymbol::<Q>::var(n, v) * &PolySymbol::conj_var(n, v);
    let sum = (1..n).fold(modsq(0), |acc, v| &acc + &modsq(v));
    let g = SymmetricSymbol::product_of_moduli(n).add(&SymmetricSymbol::new(sum)?);
    let a = CMatrix::from_fn(n, |i, j| if i <= j { c_int((i + 2 * j + 1) as i64) } else { c_int(0) });
    let exact = berezin_heat_exact(&g, &SpectralForm::diagonal(vec![c_int(0); n]))?.map(CMatrix::zeros(n), |c| a.scale(c.get(0, 0)));
    let tss = tss_expansion(&a, &g)?;
    let asy = asy_zero_expansion(&a, &g)?;
    r.put(
        "zero_eigenvalue",
        json!({"exact": enc_series(&exact), "critical_point_sum": enc_series(&tss), "nonzero_eigenvalue_formula": enc_series(&asy)}),
    );
    r.assert("critical_point_sum_is_exact", tss == exact, "expansion at X = 0 for φ = A·g");
    r.put("nonzero_eigenvalue_formula_agrees", json!(asy == exact));
    Ok(())
}
