//! Truncated Toeplitz operators, Berezin transforms and the reduction of
//! U-invariant symbols to the Segal-Bargmann space.

pub mod full;
pub mod heat;
pub mod nonlocal;
pub mod norm_example;
pub mod operator;
pub mod projection;
pub mod sweep;

pub use full::{berezin_full_domain, berezin_full_domain_product, double_integral_exact, double_integral_prediction, FullDomainBerezin};
pub use heat::{assemble_spectral, berezin_heat_exact, berezin_product_exact, coupled_phase, sharp_series, tensor_pair};
pub use nonlocal::{kernel_diag_normal, kernel_normal_pair, nonlocal_product, nonlocal_single, NonlocalCheck};
pub use norm_example::{norm_example_closed_form, norm_example_sup, norm_example_symbol, NormExample};
pub use operator::{
    basis_index, berezin_of_operator, coherent_vector, full_domain_toeplitz, normal_domain_diagonal, normal_domain_toeplitz, required_cutoff, scalar_toeplitz,
    shift_operator, toeplitz_coefficient_exact, weighted_moment, BerezinEval, CoherentVector, TruncatedOperator, WeightedSymbol, MAX_SCALAR_CUTOFF,
};
pub use projection::{lift_u_invariant, p_h_projection, p_h_series};
pub use sweep::{extrapolate_to_zero, fit_power_law, geometric_grid, PowerFit};
