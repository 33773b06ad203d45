use btq_core::kernels::Domain;
use btq_core::linalg::{max_abs_c64, op_norm};
use btq_core::random::{random_normal, random_operator, random_point, random_symmetric};
use btq_core::semiclassics::{l_series, m_series};
use btq_core::symcalc::{PolySymbol, SymmetricSymbol};
use btq_core::toeplitz::{
    berezin_heat_exact, berezin_of_operator, berezin_product_exact, lift_u_invariant, normal_domain_toeplitz, sharp_series, TruncatedOperator, WeightedSymbol,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random point rescaled to operator norm 0.6.
fn point(rng: &mut ChaCha8Rng, domain: Domain, n: usize) -> DMatrix<Complex64> {
    let x = random_point(rng, domain, n, 1.0);
    let s = op_norm(&x);
    x * Complex64::new(0.6 / s, 0.0)
}

fn domain_strategy() -> impl Strategy<Value = Domain> {
    prop_oneof![Just(Domain::Full), Just(Domain::Normal)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn transform_of_identity_is_identity(seed in any::<u64>(), domain in domain_strategy(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = point(&mut rng, domain, n);
        let t = TruncatedOperator::identity(domain, n, 0.5, 30).unwrap();
        let eval = berezin_of_operator(&t, &x, true).unwrap();
        prop_assert!(max_abs_c64(&(eval.value - DMatrix::<Complex64>::identity(n, n))) < 1e-9);
    }

    #[test]
    fn adjoint_and_norm_bound(seed in any::<u64>(), domain in domain_strategy(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_operator(&mut rng, domain, n, 0.5, 25).unwrap();
        let x = point(&mut rng, domain, n);
        let value = berezin_of_operator(&t, &x, true).unwrap().value;
        let adjoint = berezin_of_operator(&t.adjoint(), &x, true).unwrap().value;
        prop_assert!(max_abs_c64(&(adjoint - value.adjoint())) < 1e-10 * t.norm());
        prop_assert!(op_norm(&value) <= t.norm() * (1.0 + 1e-12));
    }
}

#[test]
fn exact_transforms_follow_the_semiclassical_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in [2usize, 3] {
        for _ in 0..3 {
            let f = random_symmetric(&mut rng, n, 2, 3);
            let g = random_symmetric(&mut rng, n, 2, 3);
            let x = random_normal(&mut rng, n);
            assert_eq!(berezin_heat_exact(&f, &x).unwrap(), sharp_series(&x, &l_series(&f)));
            assert_eq!(berezin_product_exact(&f, &g, &x).unwrap(), sharp_series(&x, &m_series(&f, &g).unwrap()));
        }
    }
}

#[test]
fn invariant_symbols_reduce_to_the_scalar_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let f = random_symmetric(&mut rng, 2, 3, 3).to_f64();
        let direct = normal_domain_toeplitz(&WeightedSymbol::plain(f.clone()), 0.5, 20).unwrap();
        let lifted = lift_u_invariant(&f, 0.5, 20).unwrap();
        // the compressions differ near the cutoff only
        let inner = 20 - 3;
        let block = |t: &TruncatedOperator| t.matrix.view((0, 0), (2 * inner, 2 * inner)).into_owned();
        assert!(max_abs_c64(&(block(&direct) - block(&lifted))) < 1e-10);
    }
    let spectral = SymmetricSymbol::spectral(&PolySymbol::<f64>::var(1, 0), 2).unwrap();
    assert_eq!(spectral.flat(), PolySymbol::var(1, 0));
}
