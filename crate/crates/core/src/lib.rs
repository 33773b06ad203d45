//! Berezin-Toeplitz quantization on matrix domains.
//!
//! The symbolic layers are generic over a real [`Scalar`] field; complex
//! coefficients are `Complex<S>`. Use the exact aliases (`Q`, `ExactPoly`, …)
//! for identities that must hold bit for bit and the `f64` aliases when data
//! comes from sampling or eigendecomposition.

pub mod error;
pub mod hpoly;
pub mod kernels;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod scalar;
pub mod semiclassics;
pub mod symcalc;
pub mod toeplitz;

pub use error::{Error, Result};
pub use hpoly::HPolynomial;
pub use scalar::Scalar;

/// Exact rational field.
pub type Q = num_rational::BigRational;
/// Exact complex rational.
pub type CQ = num_complex::Complex<Q>;

pub type ExactPoly = symcalc::PolySymbol<Q>;
pub type Poly64 = symcalc::PolySymbol<f64>;
pub type Poly32 = symcalc::PolySymbol<f32>;
pub type ExactMatrixPoly = symcalc::MatrixPoly<Q>;
pub type MatrixPoly64 = symcalc::MatrixPoly<f64>;
pub type ExactSymmetric = symcalc::SymmetricSymbol<Q>;
pub type Symmetric64 = symcalc::SymmetricSymbol<f64>;
pub type ExactMatrix = linalg::CMatrix<Q>;
pub type Matrix64 = linalg::CMatrix<f64>;
