mod common;

use common::Planted;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specfam::family::{build_general, build_positive, negate_family, Route};
use specfam::linalg::Vector;
use specfam::quadrature::{partition_sum, reconstruct_operator, smallest_cap};
use specfam::splitting::split;

fn planted(spectrum: Vec<f64>, seed: u64) -> (Planted<Complex64>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (Planted::new(spectrum, &mut rng), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn general_families_are_resolutions_of_identity(
        spectrum in prop::collection::vec(-5.0f64..5.0, 1..8),
        seed in any::<u64>(),
        split_route in any::<bool>(),
    ) {
        let (p, _) = planted(spectrum, seed);
        let route = if split_route { Route::Split } else { Route::Shift };
        let f = build_general(&p.a, route).unwrap();
        prop_assert!(f.diagnostics().holds());
        let back = reconstruct_operator(&f);
        prop_assert!(back.as_mat().distance(p.a.as_mat()) <= 1e-9 * p.a.frobenius_norm().max(1.0));
        prop_assert_eq!(negate_family(&negate_family(&f)), f);
    }

    #[test]
    fn splits_reduce_the_operator(
        spectrum in prop::collection::vec(
            prop_oneof![-5.0f64..-1e-6, 1e-6f64..5.0, Just(0.0)], 1..8),
        seed in any::<u64>(),
    ) {
        let (p, _) = planted(spectrum, seed);
        let s = split(&p.a).unwrap();
        prop_assert!(s.residuals(&p.a).unwrap().holds(1.0));
    }

    #[test]
    fn partition_sums_respect_their_bounds(
        spectrum in prop::collection::vec(0.0f64..6.0, 1..8),
        seed in any::<u64>(),
        k in 1u64..=64,
    ) {
        let (p, mut rng) = planted(spectrum, seed);
        let f = build_positive(&p.a).unwrap();
        let x = Vector::random(p.dim(), &mut rng);
        let n = smallest_cap(&f, &x);
        let s = partition_sum(&p.a, &f, &x, n, k).unwrap();
        prop_assert!(s.invariants_hold(&x));
        prop_assert!(s.err1 * k as f64 <= s.norm_sqr + 1e-9 * k as f64);
    }
}
