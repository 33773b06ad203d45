//! Symbols `f(d_1; d_2, …, d_N)` symmetric in the trailing variables, and the
//! flat/sharp maps built from them.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::linalg::{unitarity_residual_c64, CMatrix, SpectralForm};
use crate::scalar::Scalar;
use crate::symcalc::PolySymbol;

const UNITARY_TOL: f64 = 1e-10;

/// A polynomial in `N` variables invariant under permutations of
/// `d_2, …, d_N` (zero-based: variables `1..N`).
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSymbol<S: Scalar> {
    base: PolySymbol<S>,
}

fn adjacent_swap(n: usize, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(k, k + 1);
    p
}

impl<S: Scalar> SymmetricSymbol<S> {
    /// Validates invariance under every adjacent transposition of variables `1..N`,
    /// which generate the full symmetric group on them.
    pub fn new(base: PolySymbol<S>) -> Result<Self> {
        let n = base.nvars();
        if n == 0 {
            return Err(Error::InvalidArgument("symmetric symbol needs at least one variable".into()));
        }
        for k in 1..n.saturating_sub(1) {
            if base.permute(&adjacent_swap(n, k)) != base {
                return Err(Error::NotSymmetric(format!("variables {} and {} do not commute", k, k + 1)));
            }
        }
        Ok(Self { base })
    }

    /// Sum over the orbit of the trailing variables, divided by the orbit size.
    pub fn symmetrize(p: &PolySymbol<S>) -> Self {
        let n = p.nvars();
        let tail: Vec<usize> = (1..n).collect();
        let mut perms = Vec::new();
        permutations(&tail, &mut Vec::new(), &mut vec![false; tail.len()], &mut perms);
        let count = perms.len() as i64;
        let mut acc = PolySymbol::zero(n);
        for perm in perms {
            let mut full = vec![0];
            full.extend(perm);
            acc = &acc + &p.permute(&full);
        }
        Self {
            base: acc.scale_real(S::from_ratio(1, count)),
        }
    }

    /// The spectral symbol `f(d) = u(d_1)` from a one-variable polynomial.
    pub fn spectral(u: &PolySymbol<S>, n: usize) -> Result<Self> {
        if u.nvars() != 1 {
            return Err(Error::NvarsMismatch { left: u.nvars(), right: 1 });
        }
        let mut map = vec![0; 1];
        map[0] = 0;
        Ok(Self { base: u.embed(n, &map) })
    }

    /// `Π_j |d_j|²`.
    pub fn product_of_moduli(n: usize) -> Self {
        let base = (0..n).fold(PolySymbol::one(n), |acc, v| &(&acc * &PolySymbol::var(n, v)) * &PolySymbol::conj_var(n, v));
        Self { base }
    }

    pub fn base(&self) -> &PolySymbol<S> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.base.degree()
    }

    /// True when the symbol depends only on `d_1`.
    pub fn is_spectral(&self) -> bool {
        self.base.terms().all(|(m, _)| (1..self.n()).all(|v| m.hol_exp(v) == 0 && m.anti_exp(v) == 0))
    }

    /// `f♭(z) = f(z; 0, …, 0)`.
    pub fn flat(&self) -> PolySymbol<S> {
        self.base.restrict(&[0]).expect("variable 0 exists")
    }

    /// `Δ'` over the trailing variables, applied `power` times.
    pub fn laplacian_tail(&self, power: u32) -> Self {
        let tail: Vec<usize> = (1..self.n()).collect();
        Self {
            base: self.base.laplacian(&tail, power).expect("tail variables in range"),
        }
    }

    /// Full Laplacian over all `N` variables, applied `power` times.
    pub fn laplacian_all(&self, power: u32) -> Self {
        Self {
            base: self.base.laplacian_all(power),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            base: &self.base + &other.base,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            base: &self.base * &other.base,
        }
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        Self { base: self.base.scale(c) }
    }

    /// Values `f(d_j; d_1, …, d̂_j, …, d_N)` for each `j`.
    pub fn spectral_values(&self, eigen: &[Complex<S>]) -> Vec<Complex<S>> {
        let n = self.n();
        assert_eq!(eigen.len(), n, "eigenvalue count differs from symbol dimension");
        (0..n)
            .map(|j| {
                let mut point = vec![eigen[j].clone()];
                point.extend(eigen.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, d)| d.clone()));
                self.base.eval(&point)
            })
            .collect()
    }

    /// `f^#(V D V*)` for a normal matrix given in spectral form.
    pub fn sharp_exact(&self, x: &SpectralForm<S>) -> CMatrix<S> {
        x.conjugate_diag(&self.spectral_values(x.eigenvalues()))
    }

    /// `f^#(U D U*)` in floating point; rejects `U` that is not unitary.
    pub fn sharp_eval(&self, u: &DMatrix<Complex64>, d: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let n = self.n();
        if u.nrows() != n || u.ncols() != n || d.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "symbol dimension {n}, U {}x{}, D length {}",
                u.nrows(),
                u.ncols(),
                d.len()
            )));
        }
        let residual = unitarity_residual_c64(u);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        let values: Vec<Complex64> = (0..n)
            .map(|j| {
                let mut point = vec![d[j]];
                point.extend(d.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, z)| *z));
                self.base.eval_c64(&point)
            })
            .collect();
        Ok(u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values)) * u.adjoint())
    }

    pub fn to_f64(&self) -> SymmetricSymbol<f64> {
        SymmetricSymbol { base: self.base.to_f64() }
    }
}

fn permutations(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c_int, cr};
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type P = PolySymbol<BigRational>;
    type F = SymmetricSymbol<BigRational>;

    #[test]
    fn flat_examples() {
        let f = F::new(&(&P::var(3, 0) + &P::var(3, 1)) + &P::var(3, 2)).unwrap();
        assert_eq!(f.flat(), P::var(1, 0));
        assert!(F::product_of_moduli(2).flat().is_zero());
        let g = F::new(&(&P::var(2, 0) * &P::conj_var(2, 0)) + &P::one(2)).unwrap();
        assert_eq!(g.flat(), &(&P::var(1, 0) * &P::conj_var(1, 0)) + &P::one(1));
    }

    #[test]
    fn rejects_asymmetric_tail() {
        assert!(F::new(P::var(3, 1)).is_err());
        // asymmetry involving only d_1 is allowed
        assert!(F::new(&P::var(3, 0) + &(&P::var(3, 1) + &P::var(3, 2))).is_ok());
    }

    #[test]
    fn symmetrize_produces_valid_symbol() {
        let f = F::symmetrize(&(&P::var(3, 1) * &P::conj_var(3, 0)));
        assert!(F::new(f.base().clone()).is_ok());
        assert_eq!(f.base().coeff(&crate::symcalc::Monomial::new(&[0, 1, 0], &[1, 0, 0])), cr(1, 2));
    }

    #[test]
    fn sharp_identity_and_projection() {
        let f = F::spectral(&P::var(1, 0), 2).unwrap();
        let d = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        let out = f.sharp_eval(&DMatrix::identity(2, 2), &d).unwrap();
        assert!((out[(0, 0)] - d[0]).norm() < 1e-15 && (out[(1, 1)] - d[1]).norm() < 1e-15);

        let p = F::spectral(&(&P::var(1, 0) * &P::conj_var(1, 0)), 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(s, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, s), Complex64::new(s, 0.0)],
        );
        let z = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::zero()])) * u.adjoint();
        let out = p.sharp_eval(&u, &[Complex64::one(), Complex64::zero()]).unwrap();
        assert!((out - z.adjoint() * &z).norm() < 1e-14);
    }

    #[test]
    fn sharp_rejects_non_unitary() {
        let f = F::spectral(&P::var(1, 0), 2).unwrap();
        let u = DMatrix::from_element(2, 2, Complex64::one());
        assert!(matches!(f.sharp_eval(&u, &[Complex64::one(), Complex64::one()]), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn sharp_of_tail_function_is_permutation_invariant() {
        // f depends on d_1 only through nothing: f = d_2 + d_3 style tail sum at N = 2
        let f = F::new(&P::var(2, 1) * &P::conj_var(2, 1)).unwrap();
        let d = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5)];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(s, 0.0), Complex64::new(-s, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, s)],
        );
        let a = f.sharp_eval(&u, &d).unwrap();
        let mut u_swapped = u.clone();
        u_swapped.swap_columns(0, 1);
        let b = f.sharp_eval(&u_swapped, &[d[1], d[0]]).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn sharp_exact_diagonal() {
        let f = F::product_of_moduli(2);
        let x = SpectralForm::diagonal(vec![c_int::<BigRational>(2), c_int(3)]);
        let m = f.sharp_exact(&x);
        assert_eq!(m.get(0, 0), &c_int(36));
        assert_eq!(m.get(1, 1), &c_int(36));
        assert!(m.get(0, 1).is_zero());
        let _ = BigRational::one();
    }
}
