//! Bidifferential operators: cochains, Poisson bracket, the matrix double
//! bracket and the product operator on `(d, e)`.

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::symcalc::{entry_var, MatrixPoly, MatrixUnit, PolySymbol, SymmetricSymbol};

fn check_one_var<S: Scalar>(p: &PolySymbol<S>) -> Result<()> {
    if p.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: p.nvars(), right: 1 });
    }
    Ok(())
}

/// `C_r(f, g) = ((-1)^r / r!) ∂^r f · ∂̄^r g` for one-variable symbols.
///
/// This is the cochain of the Toeplitz composition `T_f T_g = Σ h^r T_{C_r(f,g)}`
/// on the Segal-Bargmann space, e.g. `T_z T_z̄ = T_{|z|²} − h`.
pub fn cochain_c<S: Scalar>(r: u32, f: &PolySymbol<S>, g: &PolySymbol<S>) -> Result<PolySymbol<S>> {
    check_one_var(f)?;
    check_one_var(g)?;
    let sign = if r % 2 == 0 { S::one() } else { -S::one() };
    let c = sign / factorial::<S>(r);
    Ok((&f.wirtinger_pow(0, false, r)? * &g.wirtinger_pow(0, true, r)?).scale_real(c))
}

/// Poisson bracket `{f, g} = 2πi (∂f ∂̄g − ∂g ∂̄f)` on `C`.
///
/// The transcendental factor is kept out of the polynomial: `reduced` stores
/// `(i/2π){f, g} = C_1(f, g) − C_1(g, f)`, which has coefficients in the field.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonBracket<S: Scalar> {
    reduced: PolySymbol<S>,
}

impl<S: Scalar> PoissonBracket<S> {
    /// `(i/2π){f, g}`.
    pub fn times_i_over_2pi(&self) -> &PolySymbol<S> {
        &self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.is_zero()
    }

    /// Value of `{f, g}` at `z`.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        Complex64::new(0.0, -2.0 * std::f64::consts::PI) * self.reduced.eval_c64(&[z])
    }

    /// The bracket as a floating-point polynomial.
    pub fn to_complex(&self) -> PolySymbol<f64> {
        self.reduced.to_f64().scale(&Complex64::new(0.0, -2.0 * std::f64::consts::PI))
    }
}

pub fn poisson_1d<S: Scalar>(f: &PolySymbol<S>, g: &PolySymbol<S>) -> Result<PoissonBracket<S>> {
    check_one_var(f)?;
    check_one_var(g)?;
    let a = &f.wirtinger(0, true)? * &g.wirtinger(0, false)?;
    let b = &f.wirtinger(0, false)? * &g.wirtinger(0, true)?;
    Ok(PoissonBracket { reduced: &a - &b })
}

/// `⟨⟨φ, ψ⟩⟩ = (1/N) Σ_{i,j,k} ∂φ/∂ȳ_{ij} · E_{ik} · ∂ψ/∂y_{kj}` over the `N²`
/// entry variables. The prefactor is `1/c_1`, which is `½` at `N = 2`.
pub fn double_bracket<S: Scalar>(phi: &MatrixPoly<S>, psi: &MatrixPoly<S>) -> Result<MatrixPoly<S>> {
    phi.check_compatible(psi)?;
    let n = phi.n();
    let nv = phi.nvars();
    if nv != n * n {
        return Err(Error::ShapeMismatch(format!("expected {} entry variables, found {nv}", n * n)));
    }
    let mut acc = MatrixPoly::zeros(n, nv);
    for i in 0..n {
        for j in 0..n {
            let dphi = phi.wirtinger(entry_var(n, i, j), true)?;
            if dphi.is_zero() {
                continue;
            }
            for k in 0..n {
                let dpsi = psi.wirtinger(entry_var(n, k, j), false)?;
                if dpsi.is_zero() {
                    continue;
                }
                let e = MatrixUnit::new(i, k, n)?.to_poly(nv);
                acc = &acc + &(&(&dphi * &e) * &dpsi);
            }
        }
    }
    Ok(acc.scale(&Complex::new(S::from_ratio(1, n as i64), S::zero())))
}

/// Which second-order cross term couples `d` and `e` in [`m_operator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedTerm {
    /// `∂²/∂d̄_m ∂e_q`, the term produced by the Gaussian integral.
    Conjugated,
    /// `∂²/∂d_m ∂ē_q`, the literal alternative.
    Literal,
}

/// `(Δ_(d) + Δ_(e) + ∂²/∂d̄_m∂e_q)^r [f(d) g(e)]` on `2N` variables `(d, e)`.
pub fn m_operator<S: Scalar>(r: u32, m: usize, q: usize, f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>) -> Result<PolySymbol<S>> {
    m_operator_with(r, m, q, f, g, MixedTerm::Conjugated)
}

pub fn m_operator_with<S: Scalar>(r: u32, m: usize, q: usize, f: &SymmetricSymbol<S>, g: &SymmetricSymbol<S>, mixed: MixedTerm) -> Result<PolySymbol<S>> {
    let n = f.n();
    if g.n() != n {
        return Err(Error::NvarsMismatch { left: n, right: g.n() });
    }
    if m >= n || q >= n {
        return Err(Error::InvalidArgument(format!("m = {m}, q = {q} must be below N = {n}")));
    }
    let d_map: Vec<usize> = (0..n).collect();
    let e_map: Vec<usize> = (n..2 * n).collect();
    let mut p = &f.base().embed(2 * n, &d_map) * &g.base().embed(2 * n, &e_map);
    let all: Vec<usize> = (0..2 * n).collect();
    for _ in 0..r {
        if p.is_zero() {
            break;
        }
        let cross = match mixed {
            MixedTerm::Conjugated => p.mixed(n + q, m)?,
            MixedTerm::Literal => p.mixed(m, n + q)?,
        };
        p = &p.laplacian(&all, 1)? + &cross;
    }
    Ok(p)
}
