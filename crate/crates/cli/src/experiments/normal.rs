//! Normal-domain experiments: exact heat transforms, the norm example, spectral
//! symbols and the basic properties of the transform.

use btq_core::hpoly::HPolynomial;
use btq_core::kernels::Domain;
use btq_core::linalg::{max_abs_c64, op_norm, CMatrix};
use btq_core::random::{random_normal, random_operator, random_point, random_poly};
use btq_core::semiclassics::scalar_heat_series;
use btq_core::symcalc::SymmetricSymbol;
use btq_core::toeplitz::{
    berezin_heat_exact, berezin_of_operator, norm_example_closed_form, norm_example_sup, normal_domain_toeplitz, required_cutoff, sharp_series,
    toeplitz_coefficient_exact, TruncatedOperator, WeightedSymbol,
};
use btq_core::Q;
use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{rel_diff, rng, to_dmatrix};
use crate::result::{enc_series, ExperimentResult, Verdict};

/// Coherent vectors cut at [`required_cutoff`] keep a relative tail near 1e-8.
const TRUNCATION_TOL: f64 = 1e-6;

pub fn nulo_6_2(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let ns: Vec<usize> = cfg.n.map_or(vec![2, 3], |n| vec![n]);
    let mut rng = rng(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    for &n in &ns {
        let f = SymmetricSymbol::<Q>::product_of_moduli(n);
        for s in 0..5 {
            let x = random_normal(&mut rng, n);
            let xm = x.matrix();
            let expected = HPolynomial::monomial(&xm.adjoint() * &xm, n as i32 - 1).add(&HPolynomial::monomial(CMatrix::identity(n), n as i32));
            let got = berezin_heat_exact(&f, &x)?;
            if got != expected {
                failures.push(format!("N={n} sample {s}"));
            }
            if s == 0 {
                r.put(format!("N{n}_series"), enc_series(&got));
            }
            checked += 1;
        }
    }
    r.put("points_checked", json!(checked));
    r.assert("heat_transform_is_h^(N-1) X*X + h^N I", failures.is_empty(), failures.join("; "));
    Ok(r)
}

pub fn norm_example_6(cfg: &ExperimentConfig, _seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let ns: Vec<usize> = cfg.n.map_or(vec![1, 2], |n| vec![n]);
    let q = |a: i64, b: i64| Q::new(a.into(), b.into());
    let hs = [q(1, 3), q(1, 10), q(2, 1)];
    let mut mismatches = Vec::new();
    for &n in &ns {
        let sym = WeightedSymbol::new(SymmetricSymbol::<Q>::product_of_moduli(n), Q::one())?;
        for h in &hs {
            for k in 0..=10u32 {
                let got = toeplitz_coefficient_exact(&sym, h, k, k);
                let expected = norm_example_closed_form(n as u32, h, k);
                if got != Complex::new(expected, Q::zero()) {
                    mismatches.push(format!("N={n} h={h} k={k}"));
                }
            }
        }
    }
    r.assert("diagonal_closed_form", mismatches.is_empty(), mismatches.join("; "));
    let h = 1e-3;
    let mut sups = Vec::new();
    let mut worst = 0.0f64;
    for &n in &ns {
        let ex = norm_example_sup(n, h)?;
        worst = worst.max(ex.rel_err);
        sups.push(json!({"N": n, "h": h, "sup": ex.sup, "argmax": ex.argmax, "predicted": ex.predicted, "rel_err": ex.rel_err}));
    }
    r.put("sup_over_k", json!(sups));
    r.assert("sup_matches_prediction", worst <= 0.02, format!("largest relative error {worst:.4}"));
    Ok(r)
}

pub fn sber_7_2(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let ns: Vec<usize> = cfg.n.map_or(vec![2, 3], |n| vec![n]);
    let mut rng = rng(seed);
    let h = 0.5;
    let mut exact_ok = true;
    let mut worst = 0.0f64;
    let mut truncation_short = Vec::new();
    for &n in &ns {
        for _ in 0..3 {
            let u = random_poly(&mut rng, 1, 3, 3);
            let f = SymmetricSymbol::spectral(&u, n)?;
            let x = random_normal(&mut rng, n);
            let predicted = sharp_series(&x, &scalar_heat_series(&u));
            exact_ok &= berezin_heat_exact(&f, &x)? == predicted;

            let xf = to_dmatrix(&x.matrix());
            let needed = required_cutoff(&xf, h);
            let cutoff = cfg.cutoff.unwrap_or(needed);
            let t = normal_domain_toeplitz(&WeightedSymbol::plain(f.to_f64()), h, cutoff)?;
            let eval = berezin_of_operator(&t, &xf, cfg.strict)?;
            if !eval.adequate {
                truncation_short.push(format!("cutoff {cutoff} < {needed}"));
            }
            let value = predicted.map(CMatrix::zeros(n), |m| m.map(btq_core::Scalar::to_f64)).eval(&h);
            worst = worst.max(rel_diff(&eval.value, &value.to_c64()));
        }
    }
    r.assert("exact_transform_is_scalar_heat_flow", exact_ok, "all spectral symbols");
    r.put("truncated_max_rel_err", json!(worst));
    let verdict = match (worst <= TRUNCATION_TOL, truncation_short.is_empty()) {
        (true, _) => Verdict::Pass,
        (false, false) => Verdict::Inconclusive,
        (false, true) => Verdict::Fail,
    };
    r.push(
        "truncated_operator_agrees",
        verdict,
        format!("relative error {worst:.2e} {}", truncation_short.join("; ")),
    );
    Ok(r)
}

pub fn prop_3_1(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(2);
    let h = 0.5;
    let cutoff = cfg.cutoff.unwrap_or(25);
    let mut rng = rng(seed);
    for domain in [Domain::Full, Domain::Normal] {
        let (mut id_err, mut adj_err, mut norm_ratio) = (0.0f64, 0.0f64, 0.0f64);
        let mut short = 0;
        for _ in 0..20 {
            let x = random_point(&mut rng, domain, n, 1.0);
            let x = x.clone() * Complex64::new(0.6 / op_norm(&x), 0.0);
            let t = random_operator(&mut rng, domain, n, h, cutoff)?;
            let ident = berezin_of_operator(&TruncatedOperator::identity(domain, n, h, cutoff)?, &x, cfg.strict)?;
            short += usize::from(!ident.adequate);
            id_err = id_err.max(max_abs_c64(&(ident.value - DMatrix::<Complex64>::identity(n, n))));
            let value = berezin_of_operator(&t, &x, cfg.strict)?.value;
            let adjoint = berezin_of_operator(&t.adjoint(), &x, cfg.strict)?.value;
            adj_err = adj_err.max(max_abs_c64(&(adjoint - value.adjoint())) / t.norm());
            norm_ratio = norm_ratio.max(op_norm(&value) / t.norm());
        }
        let name = domain.name();
        r.put(
            format!("{name}_domain"),
            json!({"identity_err": id_err, "adjoint_err": adj_err, "max_norm_ratio": norm_ratio, "inadequate_cutoffs": short}),
        );
        let id_verdict = if id_err <= 1e-9 {
            Verdict::Pass
        } else if short > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        };
        r.push(format!("{name}_identity"), id_verdict, format!("{id_err:.2e}"));
        r.assert(format!("{name}_adjoint"), adj_err <= 1e-12, format!("{adj_err:.2e}"));
        r.assert(
            format!("{name}_norm_bound"),
            norm_ratio <= 1.0 + 1e-12,
            format!("max ‖W̃T(X)‖/‖T‖ = {norm_ratio:.6}"),
        );
    }
    Ok(r)
}
