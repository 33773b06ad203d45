pub mod combinatorics;
pub mod expansions;
pub mod full_domain;
pub mod haar;
pub mod nonlocal;
pub mod normal;

use btq_core::linalg::{CMatrix, SpectralForm};
use btq_core::{Scalar, CQ, Q};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn to_c64(z: &CQ) -> Complex64 {
    Complex64::new(Scalar::to_f64(&z.re), Scalar::to_f64(&z.im))
}

pub(crate) fn to_dmatrix(m: &CMatrix<Q>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| to_c64(m.get(i, j)))
}

pub(crate) fn spectral_f64(x: &SpectralForm<Q>) -> SpectralForm<f64> {
    let v = x.vectors().map(|q| Scalar::to_f64(q));
    let eigen = x
        .eigenvalues()
        .iter()
        .map(|z| Complex64::new(Scalar::to_f64(&z.re), Scalar::to_f64(&z.im)))
        .collect();
    SpectralForm::new(v, eigen).expect("rounded unitary stays within tolerance")
}

/// Largest entrywise `|a − b|` relative to the larger of the two maxima.
pub(crate) fn rel_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let scale = a.iter().chain(b.iter()).fold(0.0f64, |m, z| m.max(z.norm()));
    let diff = a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
