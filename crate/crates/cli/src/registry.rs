//! The experiment registry and the parallel runner.

use std::hash::Hasher;
use std::time::Instant;

use anyhow::bail;
use fnv::FnvHasher;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::experiments;
use crate::result::ExperimentResult;

pub type ExperimentFn = fn(&ExperimentConfig, u64) -> anyhow::Result<ExperimentResult>;

pub struct Entry {
    pub id: &'static str,
    pub summary: &'static str,
    pub run: ExperimentFn,
}

pub const REGISTRY: &[Entry] = &[
    Entry {
        id: "ck-check",
        summary: "c_k closed form against the permutation count",
        run: experiments::combinatorics::ck_check,
    },
    Entry {
        id: "schur-haar",
        summary: "Haar moment identities by Monte Carlo",
        run: experiments::haar::schur_haar,
    },
    Entry {
        id: "thm-4-1",
        summary: "full-domain Berezin limit at a nilpotent point",
        run: experiments::full_domain::thm_4_1,
    },
    Entry {
        id: "thm-4-2",
        summary: "full-domain Berezin limit of a product",
        run: experiments::full_domain::thm_4_2,
    },
    Entry {
        id: "lemma-4-3",
        summary: "first two orders of the full-domain double integral",
        run: experiments::full_domain::lemma_4_3,
    },
    Entry {
        id: "thm-5-1",
        summary: "normal-domain transform at P against I and 0",
        run: experiments::nonlocal::thm_5_1,
    },
    Entry {
        id: "thm-5-2",
        summary: "normal-domain product transform at P against I and 0",
        run: experiments::nonlocal::thm_5_2,
    },
    Entry {
        id: "nulo-6-2",
        summary: "heat transform of |d_1⋯d_N|²",
        run: experiments::normal::nulo_6_2,
    },
    Entry {
        id: "norm-example-6",
        summary: "Toeplitz norm of a decaying U-invariant symbol",
        run: experiments::normal::norm_example_6,
    },
    Entry {
        id: "spectral-7-1",
        summary: "spectral pairs: g_r equals the cochain C_r",
        run: experiments::expansions::spectral_7_1,
    },
    Entry {
        id: "sber-7-2",
        summary: "transform of a spectral symbol is the scalar heat flow",
        run: experiments::normal::sber_7_2,
    },
    Entry {
        id: "moment-remark-7",
        summary: "moments of ν_N and the tail sequence",
        run: experiments::combinatorics::moment_remark_7,
    },
    Entry {
        id: "expansion-8-1",
        summary: "heat and product series through l_r and m_r",
        run: experiments::expansions::expansion_8_1,
    },
    Entry {
        id: "quantize-8-3",
        summary: "product series through g_m and the Poisson identity",
        run: experiments::expansions::quantize_8_3,
    },
    Entry {
        id: "projection-8-5",
        summary: "reduction to the scalar model through P_h",
        run: experiments::expansions::projection_8_5,
    },
    Entry {
        id: "star-assoc",
        summary: "associativity of the induced star product",
        run: experiments::expansions::star_assoc,
    },
    Entry {
        id: "prop-3-1",
        summary: "identity, adjoint and norm properties of the transform",
        run: experiments::normal::prop_3_1,
    },
];

pub fn lookup(id: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.id == id)
}

pub fn ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.id).collect()
}

/// FNV-1a of the id, mixed into the user seed so each experiment owns its stream.
pub fn experiment_seed(seed: u64, id: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(id.as_bytes());
    btq_core::measures::mix_seed(seed, h.finish())
}

pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentResult> {
    let Some(entry) = lookup(&cfg.id) else {
        bail!("unknown experiment id {:?}; try `btq list`", cfg.id);
    };
    cfg.validate()?;
    let start = Instant::now();
    let mut result = (entry.run)(cfg, experiment_seed(cfg.seed, entry.id))?;
    result.wall_clock = start.elapsed();
    Ok(result)
}

/// Runs the configs on a pool of `jobs` threads, preserving order.
pub fn run_many(configs: &[ExperimentConfig], jobs: usize) -> anyhow::Result<Vec<anyhow::Result<ExperimentResult>>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| configs.par_iter().map(run).collect()))
}
