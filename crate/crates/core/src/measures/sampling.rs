//! Samplers for the Ginibre, Haar and normal-matrix measures, and a seeded
//! sharded Monte Carlo integrator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Number of independent streams an MC run is split into.
pub const MC_SHARDS: usize = 64;
/// Smallest sample count accepted by [`mc_integrate`].
pub const MC_MIN_SAMPLES: usize = 1000;

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveH(h));
    }
    Ok(())
}

/// Complex normal with `E|z|² = var`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// `N×N` matrix with iid entries, `E[z_ij z̄_kl] = h δ_ik δ_jl`.
pub fn sample_ginibre<R: Rng + ?Sized>(n: usize, h: f64, rng: &mut R) -> Result<DMatrix<Complex64>> {
    check_h(h)?;
    Ok(DMatrix::from_fn(n, n, |_, _| complex_normal(rng, h)))
}

/// A unitary matrix drawn from Haar measure.
#[derive(Clone, Debug)]
pub struct HaarSample {
    pub u: DMatrix<Complex64>,
}

/// QR of a Ginibre matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn sample_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HaarSample {
    let g = DMatrix::from_fn(n, n, |_, _| complex_normal(rng, 1.0));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    HaarSample { u: q }
}

/// Draw from `μ_h` on normal matrices: `(U, d)` with `Z = U diag(d) U*`.
pub fn sample_normal_mu_h<R: Rng + ?Sized>(n: usize, h: f64, rng: &mut R) -> Result<(HaarSample, Vec<Complex64>)> {
    check_h(h)?;
    let u = sample_haar(n, rng);
    let d = (0..n).map(|_| complex_normal(rng, h)).collect();
    Ok((u, d))
}

/// `U diag(d) U*`.
pub fn assemble_normal(u: &DMatrix<Complex64>, d: &[Complex64]) -> DMatrix<Complex64> {
    u * DMatrix::from_diagonal(&DVector::from_column_slice(d)) * u.adjoint()
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Componentwise Monte Carlo mean with batch-means standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub samples: usize,
}

impl McEstimate {
    /// Whether `|mean_i − target_i| ≤ k σ_i` for every component, with a floor
    /// for components whose error bar is zero.
    pub fn within(&self, target: &[f64], k: f64) -> bool {
        self.mean
            .iter()
            .zip(&self.std_err)
            .zip(target)
            .all(|((m, s), t)| (m - t).abs() <= k * s + 1e-12)
    }

    /// Largest `|mean_i − target_i| / σ_i`.
    pub fn max_sigma(&self, target: &[f64]) -> f64 {
        self.mean
            .iter()
            .zip(&self.std_err)
            .zip(target)
            .map(|((m, s), t)| {
                if *s > 0.0 {
                    (m - t).abs() / s
                } else if (m - t).abs() <= 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Integrates `f` against `sampler` with `n` samples split across
/// [`MC_SHARDS`] ChaCha8 streams derived from `seed`. The result does not depend
/// on the number of worker threads.
pub fn mc_integrate<X, G, F>(sampler: G, f: F, n: usize, seed: u64) -> Result<McEstimate>
where
    G: Fn(&mut ChaCha8Rng) -> X + Sync,
    F: Fn(&X) -> Vec<f64> + Sync,
{
    if n < MC_MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs at least {MC_MIN_SAMPLES} samples, got {n}")));
    }
    let shards: Vec<Result<(usize, Vec<f64>)>> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|s| {
            let count = n / MC_SHARDS + usize::from(s < n % MC_SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, s as u64));
            let mut sum: Vec<f64> = Vec::new();
            for i in 0..count {
                let v = f(&sampler(&mut rng));
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite {
                        sample: s * (n / MC_SHARDS + 1) + i,
                    });
                }
                if sum.is_empty() {
                    sum = v;
                } else {
                    for (a, b) in sum.iter_mut().zip(v) {
                        *a += b;
                    }
                }
            }
            Ok((count, sum))
        })
        .collect();
    let shards = shards.into_iter().collect::<Result<Vec<_>>>()?;
    let dim = shards.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let mut mean = vec![0.0; dim];
    for (_, s) in &shards {
        for (m, x) in mean.iter_mut().zip(s) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let b = shards.len() as f64;
    let mut var = vec![0.0; dim];
    for (count, s) in &shards {
        for ((v, x), m) in var.iter_mut().zip(s).zip(&mean) {
            let d = x / *count as f64 - m;
            *v += d * d;
        }
    }
    let std_err = var.into_iter().map(|v| (v / (b - 1.0) / b).sqrt()).collect();
    Ok(McEstimate { mean, std_err, samples: n })
}

/// Flattens complex values into `[re, im, re, im, …]`.
pub fn flatten_complex(values: impl IntoIterator<Item = Complex64>) -> Vec<f64> {
    values.into_iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Column-major flattening of a complex matrix.
pub fn flatten_matrix(m: &DMatrix<Complex64>) -> Vec<f64> {
    flatten_complex(m.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual_c64;

    #[test]
    fn constant_integrand_has_zero_error() {
        let est = mc_integrate(|_| (), |_| vec![1.0], 2000, 3).unwrap();
        assert_eq!(est.mean, vec![1.0]);
        assert_eq!(est.std_err, vec![0.0]);
    }

    #[test]
    fn rejects_small_runs_and_nan() {
        assert!(mc_integrate(|_| (), |_| vec![1.0], 999, 0).is_err());
        let r = mc_integrate(
            |rng: &mut ChaCha8Rng| rng.random::<f64>(),
            |x| vec![if *x < 0.5 { f64::NAN } else { 1.0 }],
            1000,
            0,
        );
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn seeded_runs_are_bit_identical() {
        let run = || mc_integrate(|rng: &mut ChaCha8Rng| sample_haar(3, rng), |s| flatten_matrix(&s.u), 5000, 42).unwrap();
        assert_eq!(run(), run());
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            assert!(unitarity_residual_c64(&sample_haar(n, &mut rng).u) < 1e-12);
        }
    }

    #[test]
    fn ginibre_rejects_bad_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_ginibre(2, 0.0, &mut rng).is_err());
        assert!(sample_normal_mu_h(2, -1.0, &mut rng).is_err());
    }

    #[test]
    fn ginibre_moments() {
        let h = 0.7;
        let est = mc_integrate(
            |rng: &mut ChaCha8Rng| sample_ginibre(2, h, rng).unwrap(),
            |z| {
                let a = z[(0, 0)];
                vec![a.re, a.im, a.norm_sqr().powi(2)]
            },
            200_000,
            7,
        )
        .unwrap();
        assert!(est.within(&[0.0, 0.0, 2.0 * h * h], 4.0), "{est:?}");
    }
}
