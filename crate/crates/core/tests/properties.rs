use btq_core::random::{random_poly, random_symmetric};
use btq_core::symcalc::{cochain_c, poisson_1d, PolySymbol};
use btq_core::ExactPoly;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn polys(seed: u64, nvars: usize, count: usize) -> Vec<ExactPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_poly(&mut rng, nvars, 3, 4)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), nvars in 1usize..4) {
        let p = polys(seed, nvars, 3);
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a * &PolySymbol::one(nvars), a.clone());
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(seed in any::<u64>(), nvars in 1usize..4) {
        let p = polys(seed, nvars, 2);
        prop_assert_eq!(p[0].conj().conj(), p[0].clone());
        prop_assert_eq!((&p[0] * &p[1]).conj(), &p[0].conj() * &p[1].conj());
    }

    #[test]
    fn laplacians_on_disjoint_blocks_add(seed in any::<u64>()) {
        let p = &polys(seed, 4, 1)[0];
        let whole = p.laplacian(&[0, 1, 2, 3], 1).unwrap();
        let parts = &p.laplacian(&[0, 2], 1).unwrap() + &p.laplacian(&[1, 3], 1).unwrap();
        prop_assert_eq!(&whole, &parts);
        prop_assert_eq!(whole, p.laplacian_all(1));
    }

    #[test]
    fn first_cochain_antisymmetrizes_to_the_bracket(seed in any::<u64>()) {
        let p = polys(seed, 1, 2);
        let lhs = &cochain_c(1, &p[0], &p[1]).unwrap() - &cochain_c(1, &p[1], &p[0]).unwrap();
        let bracket = poisson_1d(&p[0], &p[1]).unwrap();
        prop_assert_eq!(&lhs, bracket.times_i_over_2pi());
    }

    #[test]
    fn symmetrized_symbols_are_accepted(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_symmetric(&mut rng, n, 3, 4);
        prop_assert!(btq_core::symcalc::SymmetricSymbol::new(f.base().clone()).is_ok());
        prop_assert_eq!(f.laplacian_all(1).flat(), f.base().laplacian_all(1).substitute_zero(&(1..n).collect::<Vec<_>>()).restrict(&[0]).unwrap());
    }
}
