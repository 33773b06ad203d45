//! Seeded generators of exact test data: polynomial symbols with small
//! rational coefficients and normal matrices with rational spectral forms.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use rand::Rng;

use crate::error::Result;
use crate::kernels::Domain;
use crate::linalg::{cayley_unitary, CMatrix, SpectralForm};
use crate::measures::{assemble_normal, complex_normal, sample_haar};
use crate::symcalc::{MatrixPoly, Monomial, PolySymbol, SymmetricSymbol};
use crate::toeplitz::TruncatedOperator;

type Q = BigRational;

/// `p/q` with `|p| ≤ max_num` and `q ∈ 1..=max_den`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Q {
    Q::new(rng.random_range(-max_num..=max_num).into(), rng.random_range(1..=max_den).into())
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex<Q> {
    Complex::new(random_rational(rng, 3, 4), random_rational(rng, 3, 4))
}

fn random_monomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, degree: u32) -> Monomial {
    let total = rng.random_range(0..=degree);
    let mut hol = vec![0; nvars];
    let mut anti = vec![0; nvars];
    for _ in 0..total {
        let v = rng.random_range(0..nvars);
        if rng.random_bool(0.5) {
            hol[v] += 1;
        } else {
            anti[v] += 1;
        }
    }
    Monomial::new(&hol, &anti)
}

/// Sum of `terms` random monomials of total degree `≤ degree`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, nvars: usize, degree: u32, terms: usize) -> PolySymbol<Q> {
    let mut p = PolySymbol::zero(nvars);
    for _ in 0..terms {
        let m = random_monomial(rng, nvars, degree);
        p.add_term(m, random_complex(rng));
    }
    p
}

/// Random polynomial in `N` variables made symmetric in `d_2, …, d_N`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, terms: usize) -> SymmetricSymbol<Q> {
    SymmetricSymbol::symmetrize(&random_poly(rng, n, degree, terms))
}

/// `N×N` matrix of random polynomials in the `N²` entries.
pub fn random_matrix_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, terms: usize) -> MatrixPoly<Q> {
    MatrixPoly::from_fn(n, n * n, |_, _| random_poly(rng, n * n, degree, terms))
}

/// Normal matrix `V diag(c) V*` with a rational Cayley unitary `V`.
pub fn random_normal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpectralForm<Q> {
    let entries: Vec<Vec<Complex<Q>>> = (0..n).map(|_| (0..n).map(|_| random_complex(rng)).collect()).collect();
    let skew = CMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex::new(Q::from_integer(0.into()), entries[i][i].im.clone())
        } else if i < j {
            entries[i][j].clone()
        } else {
            -entries[j][i].conj()
        }
    });
    let v = cayley_unitary(&skew).expect("I + A is invertible for skew-Hermitian A");
    let eigen = (0..n).map(|_| random_complex(rng)).collect();
    SpectralForm::new(v, eigen).expect("Cayley transform is unitary")
}

/// Truncated operator with iid standard complex Gaussian matrix entries.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, domain: Domain, n: usize, h: f64, cutoff: usize) -> Result<TruncatedOperator> {
    let dim = n * (cutoff + 1);
    let m = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng, 1.0));
    TruncatedOperator::new(domain, n, h, cutoff, m)
}

/// Evaluation point for `domain`: Haar-rotated diagonal for the normal
/// domain, Ginibre-like otherwise, with entries of size about `scale`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, domain: Domain, n: usize, scale: f64) -> DMatrix<Complex64> {
    match domain {
        Domain::Normal => {
            let u = sample_haar(n, rng).u;
            let d: Vec<Complex64> = (0..n).map(|_| complex_normal(rng, scale * scale)).collect();
            assemble_normal(&u, &d)
        }
        Domain::Full => DMatrix::from_fn(n, n, |_, _| complex_normal(rng, scale * scale)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(random_poly(&mut rng, 3, 4, 5).degree() <= 4);
        let f = random_symmetric(&mut rng, 3, 3, 4);
        assert!(SymmetricSymbol::new(f.base().clone()).is_ok());
        let x = random_normal(&mut rng, 3);
        assert_eq!(x.matrix().normality_residual(), 0.0);
        assert_eq!(random_matrix_poly(&mut rng, 2, 2, 3).nvars(), 4);
    }
}
