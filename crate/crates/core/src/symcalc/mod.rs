//! Exact symbolic calculus of polynomials in `z` and `z̄`.

mod brackets;
mod matrix;
mod poly;
mod symmetric;

pub use brackets::{cochain_c, double_bracket, m_operator, m_operator_with, poisson_1d, MixedTerm, PoissonBracket};
pub use matrix::{entry_var, MatrixPoly, MatrixUnit};
pub use poly::{Monomial, PolySymbol};
pub use symmetric::SymmetricSymbol;
