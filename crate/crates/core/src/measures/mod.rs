//! Gaussian, Haar and normal-matrix measures: samplers and exact moments.

mod gaussian;
mod haar;
mod sampling;

pub use gaussian::{stationary_phase_moment, wick_moment, wick_moment_h, wick_moment_matrix_h, GaussianSpec, MAX_WICK_DEGREE};
pub use haar::{haar_column_fourth_moment, haar_conjugation_average, haar_second_moment, kappa};
pub use sampling::{
    assemble_normal, complex_normal, flatten_complex, flatten_matrix, mc_integrate, mix_seed, sample_ginibre, sample_haar, sample_normal_mu_h, HaarSample,
    McEstimate, MC_MIN_SAMPLES, MC_SHARDS,
};
