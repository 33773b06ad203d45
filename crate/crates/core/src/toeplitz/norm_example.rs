//! The symbol `|det Z|² e^{−Tr Z*Z}` on normal matrices, whose Toeplitz
//! operator is diagonal in the monomial basis.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::symcalc::SymmetricSymbol;
use crate::toeplitz::operator::{normal_domain_diagonal, WeightedSymbol};

/// `Π_j |d_j|² · e^{−Σ_j |d_j|²}`.
pub fn norm_example_symbol(n: usize) -> WeightedSymbol<f64> {
    WeightedSymbol::new(SymmetricSymbol::product_of_moduli(n), 1.0).expect("weight is positive")
}

/// Closed form `(k+1) h^N / (h+1)^{2N+k}` of the `k`-th diagonal element.
pub fn norm_example_closed_form(n: u32, h: &BigRational, k: u32) -> BigRational {
    let q = BigRational::one() + h;
    BigRational::from_integer((k + 1).into()) * num_traits::pow(h.clone(), n as usize) / num_traits::pow(q, (2 * n + k) as usize)
}

/// `sup_k` of the diagonal elements, against the prediction `‖φ‖_∞^{1/N} h^{N−1}`
/// with `‖φ‖_∞ = e^{−N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormExample {
    pub n: usize,
    pub h: f64,
    pub sup: f64,
    pub argmax: usize,
    pub predicted: f64,
    pub rel_err: f64,
}

pub fn norm_example_sup(n: usize, h: f64) -> Result<NormExample> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveH(h));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let sym = norm_example_symbol(n);
    // (k+1)/(1+h)^k peaks near k = 1/h; scan well past it
    let kmax = (4.0 / h).ceil() as usize + 10;
    let (argmax, sup) = (0..=kmax)
        .map(|k| (k, normal_domain_diagonal(&sym, h, k).re))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let predicted = (-1.0f64).exp() * h.powi(n as i32 - 1);
    Ok(NormExample {
        n,
        h,
        sup,
        argmax,
        predicted,
        rel_err: (sup - predicted).abs() / predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::operator::toeplitz_coefficient_exact;
    use num_complex::Complex;
    use num_traits::Zero;

    #[test]
    fn float_diagonal_matches_closed_form() {
        for n in 1..=3u32 {
            let sym = norm_example_symbol(n as usize);
            for k in [0u32, 3, 50, 700] {
                let exact = norm_example_closed_form(n, &BigRational::new(1.into(), 8.into()), k);
                let got = normal_domain_diagonal(&sym, 0.125, k as usize).re;
                let want = num_traits::ToPrimitive::to_f64(&exact).unwrap();
                assert!((got - want).abs() <= 1e-12 * want, "N={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn exact_route_agrees_with_closed_form() {
        let h = BigRational::new(3.into(), 10.into());
        let sym = WeightedSymbol::new(SymmetricSymbol::<BigRational>::product_of_moduli(3), BigRational::one()).unwrap();
        for k in 0..=6 {
            assert_eq!(
                toeplitz_coefficient_exact(&sym, &h, k, k),
                Complex::new(norm_example_closed_form(3, &h, k), BigRational::zero())
            );
        }
    }

    #[test]
    fn sup_is_close_to_prediction() {
        for n in 1..=2 {
            let r = norm_example_sup(n, 1e-3).unwrap();
            assert!(r.rel_err < 0.02, "{r:?}");
        }
    }
}
