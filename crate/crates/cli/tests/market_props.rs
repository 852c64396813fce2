use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specfam::linalg::random::random_hermitian;
use specfam::linalg::{HermitianMatrix, Scalar};
use specfam_cli::market::{format_matrix_market, parse_matrix_market};

fn round_trip<T: Scalar>(dim: usize, seed: u64, scale: f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_hermitian::<T, _>(dim, &mut rng).scaled(scale);
    let text = format_matrix_market(&a);
    let m = parse_matrix_market(&text).unwrap();
    assert_eq!(m.defect, 0.0);
    let b: HermitianMatrix<T> = m.to_hermitian().unwrap();
    assert_eq!(a, b, "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn written_files_read_back_exactly(
        dim in 1usize..=9,
        seed in any::<u64>(),
        exponent in -200i32..200,
        complex in any::<bool>(),
    ) {
        let scale = 10f64.powi(exponent);
        if complex {
            round_trip::<Complex64>(dim, seed, scale);
        } else {
            round_trip::<f64>(dim, seed, scale);
        }
    }

    #[test]
    fn coordinate_lower_and_upper_triangles_agree(
        entries in proptest::collection::vec((1usize..=4, 1usize..=4, -1e3f64..1e3), 1..12),
    ) {
        let body = |swap: bool| {
            let mut s = format!("%%MatrixMarket matrix coordinate real symmetric\n4 4 {}\n", entries.len());
            for &(i, j, v) in &entries {
                let (r, c) = if swap { (j, i) } else { (i, j) };
                s.push_str(&format!("{r} {c} {v:e}\n"));
            }
            s
        };
        let a = parse_matrix_market(&body(false)).unwrap();
        let b = parse_matrix_market(&body(true)).unwrap();
        prop_assert_eq!(&a.entries, &b.entries);
        prop_assert_eq!(a.defect, 0.0);
    }
}
