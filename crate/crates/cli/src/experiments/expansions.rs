//! Exact semiclassical identities for U-invariant symbols and their operator oracles.

use btq_core::hpoly::HPolynomial;
use btq_core::linalg::CMatrix;
use btq_core::random::{random_normal, random_poly, random_symmetric};
use btq_core::semiclassics::{associativity_defect, g_sequence_closed_form, g_sequence_full, l_series, m_series, star_operands, GSequence, StarOperand};
use btq_core::symcalc::{cochain_c, poisson_1d, PolySymbol, SymmetricSymbol};
use btq_core::toeplitz::{
    berezin_heat_exact, berezin_product_exact, lift_u_invariant, normal_domain_toeplitz, p_h_projection, scalar_toeplitz, sharp_series, TruncatedOperator,
    WeightedSymbol,
};
use btq_core::{Scalar, Q};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{rng, spectral_f64};
use crate::result::ExperimentResult;

const FLOAT_TOL: f64 = 1e-10;

fn series_gap(a: &HPolynomial<CMatrix<f64>>, b: &HPolynomial<CMatrix<f64>>) -> f64 {
    a.sub(b).iter().map(|(_, m)| m.max_abs()).fold(0.0, f64::max)
}

fn dims(cfg: &ExperimentConfig) -> Vec<usize> {
    cfg.n.map_or(vec![2, 3], |n| vec![n])
}

pub fn expansion_8_1(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let mut rng = rng(seed);
    let (mut heat_ok, mut product_ok) = (true, true);
    let mut float_gap = 0.0f64;
    for n in dims(cfg) {
        for _ in 0..10 {
            let f = random_symmetric(&mut rng, n, 3, 4);
            let g = random_symmetric(&mut rng, n, 3, 4);
            let x = random_normal(&mut rng, n);
            heat_ok &= berezin_heat_exact(&f, &x)? == sharp_series(&x, &l_series(&f));
            product_ok &= berezin_product_exact(&f, &g, &x)? == sharp_series(&x, &m_series(&f, &g)?);

            let (ff, gf, xf) = (f.to_f64(), g.to_f64(), spectral_f64(&x));
            float_gap = float_gap.max(series_gap(&berezin_heat_exact(&ff, &xf)?, &sharp_series(&xf, &l_series(&ff))));
            float_gap = float_gap.max(series_gap(&berezin_product_exact(&ff, &gf, &xf)?, &sharp_series(&xf, &m_series(&ff, &gf)?)));
        }
    }
    r.assert("heat_equals_sum_of_l_r", heat_ok, "rational path, coefficientwise");
    r.assert("product_equals_sum_of_m_r", product_ok, "rational path, coefficientwise");
    r.put("float_path_max_gap", json!(float_gap));
    r.assert("float_path", float_gap <= FLOAT_TOL, format!("{float_gap:.2e}"));
    Ok(r)
}

pub fn quantize_8_3(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let mut rng = rng(seed);
    let mut reconstruct_ok = true;
    let mut unique_ok = true;
    let mut orders = Vec::new();
    for n in dims(cfg) {
        for _ in 0..10 {
            let f = random_symmetric(&mut rng, n, 3, 4);
            let g = random_symmetric(&mut rng, n, 3, 4);
            let x = random_normal(&mut rng, n);
            let seq = g_sequence_full(&f, &g)?;
            let product = berezin_product_exact(&f, &g, &x)?;
            reconstruct_ok &= product == sharp_series(&x, &seq.reconstruct());
            orders.push(seq.len());
            // dropping any nonzero g_m spoils the identity exactly at order m
            let target = seq.reconstruct();
            for m in (0..seq.len()).filter(|&m| !seq.get(m).is_zero()) {
                let mut terms = seq.terms().to_vec();
                terms[m] = PolySymbol::zero(1);
                unique_ok &= GSequence::new(terms).reconstruct().sub(&target).valuation() == Some(m as i32);
            }
        }
    }
    r.put("sequence_lengths", json!(orders));
    r.assert("product_equals_sum_of_heat_g_m", reconstruct_ok, "rational path, coefficientwise");
    r.assert("g_m_determined_order_by_order", unique_ok, "zeroing g_m breaks order m");

    let mut poisson_ok = true;
    for _ in 0..20 {
        let n = 2 + rng_index(&mut rng);
        let f = random_symmetric(&mut rng, n, 3, 4);
        let g = random_symmetric(&mut rng, n, 3, 4);
        let antisym = &g_sequence_full(&f, &g)?.get(1) - &g_sequence_full(&g, &f)?.get(1);
        let bracket = poisson_1d(&f.flat(), &g.flat())?;
        poisson_ok &= (&antisym - bracket.times_i_over_2pi()).is_zero();
    }
    r.assert("poisson_identity", poisson_ok, "g₁(f,g) − g₁(g,f) = (i/2π){f♭, g♭} on 20 pairs");
    Ok(r)
}

fn rng_index(rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    rng.random_range(0..2)
}

pub fn spectral_7_1(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let mut rng = rng(seed);
    let mut cochains_ok = true;
    let mut transform_ok = true;
    for n in dims(cfg) {
        for _ in 0..10 {
            let v = random_poly(&mut rng, 1, 3, 4);
            let w = random_poly(&mut rng, 1, 3, 4);
            let f = SymmetricSymbol::spectral(&v, n)?;
            let g = SymmetricSymbol::spectral(&w, n)?;
            let seq = g_sequence_full(&f, &g)?;
            for m in 0..seq.len() + 1 {
                cochains_ok &= seq.get(m) == cochain_c(m as u32, &v, &w)?;
            }
            let x = random_normal(&mut rng, n);
            transform_ok &= berezin_product_exact(&f, &g, &x)? == sharp_series(&x, &seq.reconstruct());
        }
    }
    r.assert("g_r_equals_cochain", cochains_ok, "recursion against C_r(v, w), exact");
    r.assert("product_transform_of_spectral_pair", transform_ok, "exact");
    Ok(r)
}

fn interior(t: &TruncatedOperator, size: usize) -> DMatrix<Complex64> {
    let s = size * t.n;
    t.matrix.view((0, 0), (s, s)).into_owned()
}

fn abs_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn projection_8_5(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(2);
    let cutoff = cfg.cutoff.unwrap_or(40);
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut closed_ok = true;
    for _ in 0..10 {
        let f = random_symmetric(&mut rng, n, 3, 3);
        let g = random_symmetric(&mut rng, n, 3, 3);
        let full = g_sequence_full(&f, &g)?;
        closed_ok &= full == g_sequence_closed_form(&f, &g, full.len() - 1)?;
        let (ff, gf) = (f.to_f64(), g.to_f64());
        for h in [0.5, 0.25] {
            let direct = normal_domain_toeplitz(&WeightedSymbol::plain(ff.clone()), h, cutoff)?.compose(&normal_domain_toeplitz(
                &WeightedSymbol::plain(gf.clone()),
                h,
                cutoff,
            )?)?;
            let reduced = lift_u_invariant(&ff, h, cutoff)?.compose(&lift_u_invariant(&gf, h, cutoff)?)?;
            worst = worst.max(abs_gap(&direct.matrix, &reduced.matrix));
        }
    }
    r.put("max_entry_gap", json!(worst));
    r.assert(
        "composition_reduces_to_scalar_model",
        worst <= FLOAT_TOL,
        format!("{worst:.2e} at cutoff {cutoff}"),
    );
    r.assert("closed_form_g_m", closed_ok, "recursion against the cochain expansion of P_h f ⋆ P_h g");
    Ok(r)
}

fn scalar_op(p: &PolySymbol<Q>, h: f64, cutoff: usize) -> anyhow::Result<TruncatedOperator> {
    Ok(scalar_toeplitz(&WeightedSymbol::scalar(p.to_f64(), 0.0)?, h, cutoff)?)
}

pub fn star_assoc(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let n = cfg.n.unwrap_or(2);
    let cutoff = cfg.cutoff.unwrap_or(40);
    let h = Q::new(1.into(), 2.into());
    let hf = h.to_f64();
    let mut rng = rng(seed);
    let mut defect_ok = true;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let [f, g, k] = [(); 3].map(|_| random_symmetric(&mut rng, n, 2, 3));
        defect_ok &= associativity_defect(&f, &g, &k, 2)?.is_zero();

        // full series against T_{P_h f} T_{P_h g} T_{P_h k}
        let order = (f.degree() + g.degree() + k.degree()) as usize;
        let sym = |s: &SymmetricSymbol<Q>| StarOperand::Symbol(s.clone());
        let fg = star_operands(&sym(&f), &sym(&g), n, order)?;
        let gk = star_operands(&sym(&g), &sym(&k), n, order)?;
        let left = star_operands(&StarOperand::Series(fg), &sym(&k), n, order)?.eval(&h);
        let right = star_operands(&sym(&f), &StarOperand::Series(gk), n, order)?.eval(&h);
        let ops = [&f, &g, &k].map(|s| scalar_op(&p_h_projection(s, &h), hf, cutoff));
        let [tf, tg, tk] = ops;
        let triple = tf?.compose(&tg?)?.compose(&tk?)?;
        let size = cutoff + 1 - order;
        let oracle = interior(&triple, size);
        let scale = oracle.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        for side in [left, right] {
            worst = worst.max(abs_gap(&interior(&scalar_op(&side, hf, cutoff)?, size), &oracle) / scale);
        }
    }
    r.assert("defect_vanishes_through_h2", defect_ok, "exact, 10 triples");
    r.put("operator_oracle_rel_gap", json!(worst));
    r.assert("series_matches_operator_composition", worst <= FLOAT_TOL, format!("{worst:.2e} at h = 1/2"));
    Ok(r)
}
