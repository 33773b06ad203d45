//! Reduction of U-invariant symbols to one variable.

use num_complex::Complex;

use crate::error::Result;
use crate::hpoly::HPolynomial;
use crate::scalar::{factorial, Scalar};
use crate::symcalc::{PolySymbol, SymmetricSymbol};
use crate::toeplitz::operator::{scalar_toeplitz, TruncatedOperator, WeightedSymbol};

/// `P_h f = Σ_j h^j/j! (Δ'^j f)♭` as a terminating series in `h` with
/// one-variable coefficients; `Δ'` acts on `d_2, …, d_N`.
pub fn p_h_series<S: Scalar>(f: &SymmetricSymbol<S>) -> HPolynomial<PolySymbol<S>> {
    let mut coeffs = Vec::new();
    let mut current = f.clone();
    let mut j = 0u32;
    while !current.base().is_zero() {
        let inv = Complex::new(S::one() / factorial::<S>(j), S::zero());
        coeffs.push(current.flat().scale(&inv));
        current = current.laplacian_tail(1);
        j += 1;
    }
    HPolynomial::from_coeffs(PolySymbol::zero(1), coeffs)
}

/// `P_h f` at a fixed `h`.
pub fn p_h_projection<S: Scalar>(f: &SymmetricSymbol<S>, h: &S) -> PolySymbol<S> {
    p_h_series(f).eval(h)
}

/// `T_{f^#}` on the normal domain through the isomorphism with
/// `T_{P_h f} ⊗ I_N` on the Segal-Bargmann space.
pub fn lift_u_invariant<S: Scalar>(f: &SymmetricSymbol<S>, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    let scalar = p_h_projection(&f.to_f64(), &h);
    scalar_toeplitz(&WeightedSymbol::scalar(scalar, 0.0)?, h, cutoff)?.tensor_identity(f.n())
}
