//! Exact integer checks: `c_k` and the moments of `ν_N`.

use btq_core::kernels::{c_k_case_split, c_k_combinatorial, c_k_formula, nu_n_moment_check, tail_sequence};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::result::ExperimentResult;

pub fn ck_check(cfg: &ExperimentConfig, _seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let nmax = cfg.n.unwrap_or(4) as u32;
    let kmax = 6u32;
    let mut table = Vec::new();
    let mut mismatches = Vec::new();
    let mut skipped = 0usize;
    for n in 1..=nmax {
        let mut row = Vec::new();
        for k in 0..=kmax {
            let formula = c_k_formula(n, k);
            match c_k_combinatorial(n, k) {
                Ok(count) if count == formula => {}
                Ok(count) => mismatches.push(format!("N={n} k={k}: {formula} vs {count}")),
                Err(_) => skipped += 1,
            }
            if BigRational::from_integer(formula.clone()) != c_k_case_split(n, k) {
                mismatches.push(format!("N={n} k={k}: case split differs"));
            }
            row.push(formula.to_string());
        }
        table.push(row);
    }
    r.put("c_k", json!(table));
    r.put("skipped_by_resource_guard", json!(skipped));
    r.assert("formula_equals_count", mismatches.is_empty() && skipped == 0, mismatches.join("; "));
    let spots = (1..=nmax).all(|n| {
        let nn = BigInt::from(n);
        c_k_formula(n, 0) == BigInt::from(1) && c_k_formula(n, 1) == nn && c_k_formula(n, 2) == &nn * &nn + 1
    });
    r.assert("spot_values", spots, "c_0 = 1, c_1 = N, c_2 = N² + 1");
    Ok(r)
}

pub fn moment_remark_7(cfg: &ExperimentConfig, _seed: u64) -> anyhow::Result<ExperimentResult> {
    let mut r = ExperimentResult::new(cfg);
    let nmax = cfg.n.unwrap_or(3) as u32;
    let kmax = 8u32;
    let mut bad = Vec::new();
    let mut moments = Vec::new();
    for n in 1..=nmax {
        let mut row = Vec::new();
        for k in 0..=kmax {
            let (lhs, rhs) = nu_n_moment_check(n, k);
            if lhs != rhs {
                bad.push(format!("N={n} k={k}: {lhs} vs {rhs}"));
            }
            row.push(lhs.to_string());
        }
        moments.push(row);
    }
    r.put("moments", json!(moments));
    r.assert("moments_match_product_formula", bad.is_empty(), bad.join("; "));
    let mut tails = Vec::new();
    let mut too_many = Vec::new();
    for n in 1..=nmax {
        let seq = tail_sequence(n, kmax);
        let nonzero = seq.iter().filter(|t| !t.is_zero()).count();
        if nonzero > (n as usize).saturating_sub(2) {
            too_many.push(format!("N={n}: {nonzero} nonzero"));
        }
        tails.push(json!({"N": n, "terms": seq.iter().map(|t| t.to_string()).collect::<Vec<_>>(), "nonzero": nonzero}));
    }
    r.put("tail_sequences", json!(tails));
    r.assert("tail_has_at_most_n_minus_2_terms", too_many.is_empty(), too_many.join("; "));
    Ok(r)
}
