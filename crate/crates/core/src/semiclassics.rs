//! Semiclassical expansions for U-invariant symbols: the heat operators `l_r`,
//! the product operators `m_r`, the sequence `g_r` with its closed form, and
//! the star product they define.
//!
//! Every series here terminates for polynomial symbols, so comparisons are
//! exact identities between [`HPolynomial`]s.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hpoly::HPolynomial;
use crate::linalg::CMatrix;
use crate::measures::kappa;
use crate::scalar::{factorial, Scalar};
use crate::symcalc::{cochain_c, m_operator_with, MixedTerm, PolySymbol, SymmetricSymbol};
use crate::toeplitz::p_h_series;

fn inv_factorial<S: Scalar>(r: u32) -> Complex<S> {
    Complex::new(S::one() / factorial::<S>(r), S::zero())
}

fn check_pair<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> Result<()> {
    if f.n() != g.n() {
        return Err(Error::NvarsMismatch { left: f.n(), right: g.n() });
    }
    Ok(())
}

/// `l_r f = (1/r!) (Δ^r f)♭`, `Δ` over all `N` variables.
pub fn l_r<S: Scalar>(f: &SymmetricSymbol<S>, r: u32) -> PolySymbol<S> {
    f.laplacian_all(r).flat().scale(&inv_factorial(r))
}

/// `Σ_r h^r l_r f`.
pub fn l_series<S: Scalar>(f: &SymmetricSymbol<S>) -> HPolynomial<PolySymbol<S>> {
    let top = f.degree() / 2;
    HPolynomial::from_coeffs(PolySymbol::zero(1), (0..=top).map(|r| l_r(f, r)).collect())
}

/// `d = e = (z, 0, …, 0)` applied to a polynomial in `(d, e)`.
fn restrict_diagonal<S: Scalar>(p: &PolySymbol<S>, n: usize) -> Result<PolySymbol<S>> {
    Ok(p.restrict(&[0, n])?.embed(1, &[0, 0]))
}

/// `m_r(f, g) = (1/r!) [(Δ_(d) + Δ_(e) + ∂²/∂d̄_1∂e_1)^r f(d) g(e)]` at `d = e = (z, 0, …, 0)`.
pub fn m_r<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, r: u32) -> Result<PolySymbol<S>> {
    m_r_with(f, g, r, MixedTerm::Conjugated)
}

/// [`m_r`] with a chosen cross term.
pub fn m_r_with<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, r: u32, mixed: MixedTerm) -> Result<PolySymbol<S>> {
    check_pair(f, g)?;
    let p = m_operator_with(r, 0, 0, f, g, mixed)?;
    Ok(restrict_diagonal(&p, f.n())?.scale(&inv_factorial(r)))
}

/// `Σ_r h^r m_r(f, g)`; terms vanish beyond `r = (deg f + deg g)/2`.
pub fn m_series<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> Result<HPolynomial<PolySymbol<S>>> {
    m_series_with(f, g, MixedTerm::Conjugated)
}

pub fn m_series_with<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, mixed: MixedTerm) -> Result<HPolynomial<PolySymbol<S>>> {
    let top = (f.degree() + g.degree()) / 2;
    let coeffs = (0..=top).map(|r| m_r_with(f, g, r, mixed)).collect::<Result<Vec<_>>>()?;
    Ok(HPolynomial::from_coeffs(PolySymbol::zero(1), coeffs))
}

/// One-variable symbols `g_0, g_1, …` with
/// `W̃(T_{f^#} T_{g^#}) = Σ_m h^m W̃T_{g_m^#}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GSequence<S: Scalar> {
    terms: Vec<PolySymbol<S>>,
}

impl<S: Scalar> GSequence<S> {
    pub fn new(terms: Vec<PolySymbol<S>>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[PolySymbol<S>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `g_m`, zero beyond the stored range.
    pub fn get(&self, m: usize) -> PolySymbol<S> {
        self.terms.get(m).cloned().unwrap_or_else(|| PolySymbol::zero(1))
    }

    /// `Σ_m h^m g_m`.
    pub fn to_series(&self) -> HPolynomial<PolySymbol<S>> {
        HPolynomial::from_coeffs(PolySymbol::zero(1), self.terms.clone())
    }

    /// `Σ_m h^m heat(g_m)`: the series in `h` of one-variable symbols whose sharp
    /// reproduces the product transform.
    pub fn reconstruct(&self) -> HPolynomial<PolySymbol<S>> {
        let mut acc = HPolynomial::zero(PolySymbol::zero(1));
        for (m, g) in self.terms.iter().enumerate() {
            acc = acc.add(&scalar_heat_series(g).shift(m as i32));
        }
        acc
    }
}

/// Order at which `g_r` vanishes for good.
fn g_top<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> usize {
    ((f.degree() + g.degree()) / 2) as usize
}

/// `g_r = m_r − Σ_{n=1}^r Δ^n g_{r−n} / n!`, for `r ≤ max_order`.
pub fn g_sequence<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, max_order: usize) -> Result<GSequence<S>> {
    check_pair(f, g)?;
    let mut terms: Vec<PolySymbol<S>> = Vec::with_capacity(max_order + 1);
    for r in 0..=max_order {
        let mut next = m_r(f, g, r as u32)?;
        for n in 1..=r {
            next = &next - &terms[r - n].laplacian_all(n as u32).scale(&inv_factorial(n as u32));
        }
        terms.push(next);
    }
    Ok(GSequence::new(terms))
}

/// The whole (terminating) sequence.
pub fn g_sequence_full<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> Result<GSequence<S>> {
    g_sequence(f, g, g_top(f, g))
}

/// `g_m = Σ_{j+k+r=m} C_r((Δ'^j f)♭/j!, (Δ'^k g)♭/k!)`, i.e. the cochain
/// expansion of `P_h f ⋆ P_h g`.
pub fn g_sequence_closed_form<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, max_order: usize) -> Result<GSequence<S>> {
    check_pair(f, g)?;
    let pf = p_h_series(f);
    let pg = p_h_series(g);
    let mut terms = Vec::with_capacity(max_order + 1);
    for m in 0..=max_order as i32 {
        let mut acc = PolySymbol::zero(1);
        for j in 0..=m {
            for k in 0..=(m - j) {
                let r = (m - j - k) as u32;
                acc = &acc + &cochain_c(r, &pf.coeff(j), &pg.coeff(k))?;
            }
        }
        terms.push(acc);
    }
    Ok(GSequence::new(terms))
}

/// `Σ_j h^j Δ^j φ / j!` for a one-variable polynomial.
pub fn scalar_heat_series<S: Scalar>(phi: &PolySymbol<S>) -> HPolynomial<PolySymbol<S>> {
    let top = phi.degree() / 2;
    HPolynomial::from_coeffs(
        PolySymbol::zero(phi.nvars()),
        (0..=top).map(|j| phi.laplacian_all(j).scale(&inv_factorial(j))).collect(),
    )
}

/// `Σ_j h^j Δ^j φ(x) / j!`.
pub fn scalar_heat_expansion<S: Scalar>(phi: &PolySymbol<S>, x: &Complex<S>) -> Result<HPolynomial<Complex<S>>> {
    if phi.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: phi.nvars(), right: 1 });
    }
    Ok(scalar_heat_series(phi).map(Complex::zero(), |c| c.eval(std::slice::from_ref(x))))
}

/// `f * g = Σ_{r ≤ order} h^r g_r(f, g)`.
pub fn star_product<S: Scalar>(f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, order: usize) -> Result<HPolynomial<PolySymbol<S>>> {
    Ok(g_sequence(f, g, order)?.to_series())
}

/// An operand of the star product: a U-invariant symbol or an `h`-series of
/// one-variable symbols (read as spectral symbols).
#[derive(Clone, Debug)]
pub enum StarOperand<S: Scalar> {
    Symbol(SymmetricSymbol<S>),
    Series(HPolynomial<PolySymbol<S>>),
}

impl<S: Scalar> StarOperand<S> {
    fn terms(&self, n: usize) -> Result<Vec<(i32, SymmetricSymbol<S>)>> {
        match self {
            StarOperand::Symbol(f) => Ok(vec![(0, f.clone())]),
            StarOperand::Series(s) => s.iter().map(|(k, u)| Ok((k, SymmetricSymbol::spectral(u, n)?))).collect(),
        }
    }
}

/// `a * b` through order `order`, extended `h`-bilinearly to series operands.
pub fn star_operands<S: Scalar>(a: &StarOperand<S>, b: &StarOperand<S>, n: usize, order: usize) -> Result<HPolynomial<PolySymbol<S>>> {
    let mut acc = HPolynomial::zero(PolySymbol::zero(1));
    for (i, f) in a.terms(n)? {
        for (j, g) in b.terms(n)? {
            let shift = i + j;
            if shift > order as i32 {
                continue;
            }
            let part = star_product(&f, &g, order - shift as usize)?;
            acc = acc.add(&part.shift(shift));
        }
    }
    Ok(acc.truncate(order as i32))
}

/// `(f * g) * k − f * (g * k)` through order `order`.
pub fn associativity_defect<S: Scalar>(
    f: &SymmetricSymbol<S>,
    g: &SymmetricSymbol<S>,
    k: &SymmetricSymbol<S>,
    order: usize,
) -> Result<HPolynomial<PolySymbol<S>>> {
    check_pair(f, g)?;
    check_pair(g, k)?;
    let n = f.n();
    let fg = star_operands(&StarOperand::Symbol(f.clone()), &StarOperand::Symbol(g.clone()), n, order)?;
    let gk = star_operands(&StarOperand::Symbol(g.clone()), &StarOperand::Symbol(k.clone()), n, order)?;
    let left = star_operands(&StarOperand::Series(fg), &StarOperand::Symbol(k.clone()), n, order)?;
    let right = star_operands(&StarOperand::Symbol(f.clone()), &StarOperand::Series(gk), n, order)?;
    Ok(left.sub(&right))
}

fn check_fully_symmetric<S: Scalar>(g: &SymmetricSymbol<S>) -> Result<()> {
    let n = g.n();
    if n > 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, 1);
        if g.base().permute(&perm) != *g.base() {
            return Err(Error::NotSymmetric("scalar U-invariant weight must be symmetric in all eigenvalues".into()));
        }
    }
    Ok(())
}

fn scalar_series_at_zero<S: Scalar>(g: &SymmetricSymbol<S>) -> Vec<Complex<S>> {
    (0..=g.degree() / 2)
        .map(|r| g.laplacian_all(r).base().constant_term() * inv_factorial(r))
        .collect()
}

/// Expansion at `X = 0` obtained by summing over the critical points `d = 0`
/// for every slot, for `φ = A · g` with `g` invariant under all permutations:
/// `Σ_r (h^r/r!) Δ^r g(0) · A`.
pub fn tss_expansion<S: Scalar>(a: &CMatrix<S>, g: &SymmetricSymbol<S>) -> Result<HPolynomial<CMatrix<S>>> {
    check_fully_symmetric(g)?;
    let coeffs = scalar_series_at_zero(g).into_iter().map(|c| a.scale(&c)).collect();
    Ok(HPolynomial::from_coeffs(CMatrix::zeros(a.n()), coeffs))
}

/// The nonzero-eigenvalue formula evaluated at `c_a = 0`, for `φ = A · g`:
/// `Σ_r (h^r/r!) Δ^r g(0) · [Σ_{jk} κ_{jk} A_{jk}]_{ab}` with the Haar fourth
/// moments `κ`.
pub fn asy_zero_expansion<S: Scalar>(a: &CMatrix<S>, g: &SymmetricSymbol<S>) -> Result<HPolynomial<CMatrix<S>>> {
    check_fully_symmetric(g)?;
    let n = a.n();
    let mixed = CMatrix::from_fn(n, |p, q| {
        let mut acc = Complex::<S>::zero();
        for j in 0..n {
            for k in 0..n {
                acc = acc + a.get(j, k).clone() * Complex::new(kappa::<S>(n, p, j, k, q), S::zero());
            }
        }
        acc
    });
    let coeffs = scalar_series_at_zero(g).into_iter().map(|c| mixed.scale(&c)).collect();
    Ok(HPolynomial::from_coeffs(CMatrix::zeros(n), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SpectralForm;
    use crate::random::{random_normal, random_symmetric};
    use crate::scalar::{c_int, cx};
    use crate::toeplitz::{berezin_heat_exact, berezin_product_exact, sharp_series};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;
    type P = PolySymbol<Q>;
    type F = SymmetricSymbol<Q>;

    fn modsq(n: usize, v: usize) -> P {
        &P::var(n, v) * &P::conj_var(n, v)
    }

    #[test]
    fn l_r_of_product_of_moduli() {
        for n in 2..=4usize {
            let f = F::product_of_moduli(n);
            for r in 0..=(n as u32 + 1) {
                let expected = match r as usize {
                    x if x == n - 1 => modsq(1, 0),
                    x if x == n => P::one(1),
                    _ => P::zero(1),
                };
                assert_eq!(l_r(&f, r), expected, "N={n} r={r}");
            }
        }
    }

    #[test]
    fn spectral_l_r_is_scalar_heat() {
        let u = &modsq(1, 0).pow(2) + &P::var(1, 0);
        let f = F::spectral(&u, 3).unwrap();
        assert_eq!(l_series(&f), scalar_heat_series(&u));
    }

    #[test]
    fn m_r_low_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_symmetric(&mut rng, 2, 3, 4);
        let g = random_symmetric(&mut rng, 2, 3, 4);
        assert_eq!(m_r(&f, &g, 0).unwrap(), &f.flat() * &g.flat());
        // m_1 = (gΔf + fΔg + ∂f/∂d̄_1 · ∂g/∂e_1)♭
        let df = f.base().wirtinger(0, true).unwrap();
        let dg = g.base().wirtinger(0, false).unwrap();
        let expected = &(&(&g.flat() * &f.laplacian_all(1).flat()) + &(&f.flat() * &g.laplacian_all(1).flat()))
            + &(&df.restrict(&[0]).unwrap() * &dg.restrict(&[0]).unwrap());
        assert_eq!(m_r(&f, &g, 1).unwrap(), expected);
        let one = F::new(P::one(2)).unwrap();
        for r in 0..4 {
            assert_eq!(m_r(&f, &one, r).unwrap(), l_r(&f, r));
        }
    }

    #[test]
    fn expansions_match_exact_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 3] {
            let f = random_symmetric(&mut rng, n, 3, 4);
            let g = random_symmetric(&mut rng, n, 2, 3);
            let x = random_normal(&mut rng, n);
            assert_eq!(berezin_heat_exact(&f, &x).unwrap(), sharp_series(&x, &l_series(&f)));
            let product = berezin_product_exact(&f, &g, &x).unwrap();
            assert_eq!(product, sharp_series(&x, &m_series(&f, &g).unwrap()));
            let seq = g_sequence_full(&f, &g).unwrap();
            assert_eq!(product, sharp_series(&x, &seq.reconstruct()));
        }
    }

    #[test]
    fn literal_cross_term_breaks_the_product_expansion() {
        let f = F::new(&modsq(2, 0) + &P::var(2, 0)).unwrap();
        let g = F::new(&modsq(2, 0) + &P::conj_var(2, 0)).unwrap();
        let x = SpectralForm::diagonal(vec![cx(Q::new(1.into(), 2.into()), Q::zero()), c_int(1)]);
        let product = berezin_product_exact(&f, &g, &x).unwrap();
        assert_ne!(product, sharp_series(&x, &m_series_with(&f, &g, MixedTerm::Literal).unwrap()));
    }

    #[test]
    fn recursion_equals_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let f = random_symmetric(&mut rng, 3, 4, 4);
            let g = random_symmetric(&mut rng, 3, 4, 4);
            let top = g_top(&f, &g) + 1;
            assert_eq!(g_sequence(&f, &g, top).unwrap(), g_sequence_closed_form(&f, &g, top).unwrap());
        }
    }

    #[test]
    fn spectral_pairs_give_cochains() {
        let u = &modsq(1, 0) + &P::var(1, 0).pow(2);
        let v = &P::conj_var(1, 0).pow(2) + &modsq(1, 0).pow(2);
        let f = F::spectral(&u, 2).unwrap();
        let g = F::spectral(&v, 2).unwrap();
        let seq = g_sequence_full(&f, &g).unwrap();
        for r in 0..seq.len() {
            assert_eq!(seq.get(r), cochain_c(r as u32, &u, &v).unwrap());
        }
    }

    #[test]
    fn poisson_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let f = random_symmetric(&mut rng, 2, 3, 4);
            let g = random_symmetric(&mut rng, 2, 3, 4);
            let lhs = &g_sequence(&f, &g, 1).unwrap().get(1) - &g_sequence(&g, &f, 1).unwrap().get(1);
            let bracket = crate::symcalc::poisson_1d(&f.flat(), &g.flat()).unwrap();
            assert_eq!(&lhs, bracket.times_i_over_2pi());
        }
    }

    #[test]
    fn one_is_not_a_unit() {
        let f = F::new(&modsq(2, 0) * &modsq(2, 1)).unwrap();
        let one = F::new(P::one(2)).unwrap();
        let s = star_product(&f, &one, 2).unwrap();
        assert_eq!(s.coeff(0), f.flat());
        assert!(!s.coeff(1).is_zero());
    }

    #[test]
    fn associativity_through_order_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..3 {
            let [f, g, k] = [0, 1, 2].map(|_| random_symmetric(&mut rng, 2, 3, 3));
            assert!(associativity_defect(&f, &g, &k, 2).unwrap().is_zero());
        }
    }

    #[test]
    fn zeroing_a_g_term_breaks_reconstruction() {
        let f = F::new(&modsq(2, 0) * &modsq(2, 1) + P::var(2, 0)).unwrap();
        let g = F::new(&modsq(2, 0) + &modsq(2, 1)).unwrap();
        let seq = g_sequence_full(&f, &g).unwrap();
        let target = m_series(&f, &g).unwrap();
        assert_eq!(seq.reconstruct(), target);
        for m in 0..seq.len() {
            if seq.get(m).is_zero() {
                continue;
            }
            let mut terms = seq.terms().to_vec();
            terms[m] = P::zero(1);
            let broken = GSequence::new(terms).reconstruct().sub(&target);
            assert_eq!(broken.valuation(), Some(m as i32));
        }
    }

    #[test]
    fn tss_matches_exact_value_at_zero_and_asy_does_not() {
        let n = 2;
        let g = F::product_of_moduli(n).add(&F::new(&modsq(n, 0) + &modsq(n, 1)).unwrap());
        let a = CMatrix::from_rows(vec![vec![c_int(1), c_int(2)], vec![c_int(0), c_int(3)]]);
        let exact = berezin_heat_exact(&g, &SpectralForm::diagonal(vec![c_int(0); n])).unwrap();
        let exact = exact.map(CMatrix::zeros(n), |c| a.scale(c.get(0, 0)));
        assert_eq!(tss_expansion(&a, &g).unwrap(), exact);
        assert_ne!(asy_zero_expansion(&a, &g).unwrap(), exact);
        // scalar A: both agree
        let id = CMatrix::identity(n);
        assert_eq!(asy_zero_expansion(&id, &g).unwrap(), tss_expansion(&id, &g).unwrap());
    }
}
