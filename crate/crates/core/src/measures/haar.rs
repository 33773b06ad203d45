//! Closed-form Haar moments up to degree four.

use num_complex::Complex;

use crate::linalg::CMatrix;
use crate::scalar::Scalar;

fn delta<S: Scalar>(a: usize, b: usize) -> S {
    if a == b {
        S::one()
    } else {
        S::zero()
    }
}

/// `∫ u_ij ū_kl dU = δ_ik δ_jl / N`.
pub fn haar_second_moment<S: Scalar>(n: usize, i: usize, j: usize, k: usize, l: usize) -> S {
    delta::<S>(i, k) * delta(j, l) / S::from_int(n as i64)
}

/// `∫ u_al ū_jl u_kl ū_bl dU = (δ_aj δ_kb + δ_ab δ_kj) / (N(N+1))`, any column `l`.
pub fn haar_column_fourth_moment<S: Scalar>(n: usize, a: usize, j: usize, k: usize, b: usize) -> S {
    let n = n as i64;
    (delta::<S>(a, j) * delta(k, b) + delta::<S>(a, b) * delta(k, j)) / S::from_int(n * (n + 1))
}

/// `κ_jk = Σ_l ∫ u_al ū_jl u_kl ū_bl dU = (δ_aj δ_kb + δ_ab δ_kj) / (N+1)`.
pub fn kappa<S: Scalar>(n: usize, a: usize, j: usize, k: usize, b: usize) -> S {
    haar_column_fourth_moment::<S>(n, a, j, k, b) * S::from_int(n as i64)
}

/// `∫ U X U* dU = Tr(X)/N · I`.
pub fn haar_conjugation_average<S: Scalar>(x: &CMatrix<S>) -> CMatrix<S> {
    let n = x.n();
    CMatrix::identity(n).scale(&(x.trace() * Complex::new(S::from_ratio(1, n as i64), S::zero())))
}
