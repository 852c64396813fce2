mod common;

use common::{gapped_spectrum, Planted};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specfam::linalg::{Mat, Scalar, Vector};
use specfam::subspace::{membership, subspace, SubspaceBuilder, DEFAULT_M_MAX, DEFAULT_REL_TOL};

/// λ uniform in `[0, 1.2 ρ]`, at least `1e-3 ‖A‖_F` away from every `|μ|`.
fn gapped_lambda<T: Scalar, R: Rng>(p: &Planted<T>, rng: &mut R) -> Option<f64> {
    let norm = p.a.frobenius_norm();
    let rho = p.spectrum.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    (0..50)
        .map(|_| rng.random_range(0.0..=1.2 * rho))
        .find(|l| {
            p.spectrum
                .iter()
                .all(|s| (s.abs() - l).abs() >= 1e-3 * norm)
        })
}

fn agreement_round<T: Scalar>(rng: &mut ChaCha8Rng, class: usize) -> Option<bool> {
    let d = rng.random_range(1..=12);
    let spectrum: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
    let p = Planted::<T>::new(spectrum, rng);
    let lambda = gapped_lambda(&p, rng)?;
    let inside = |s: f64| s.abs() < lambda;
    let below = p.spectrum.iter().filter(|s| inside(**s)).count();
    let above = d - below;
    let (x, expected) = match class {
        0 => (p.vector_in(|_| true, rng), above == 0),
        1 if below > 0 => (p.vector_in(inside, rng), true),
        2 if above > 0 => {
            // Member part plus one nonmember eigendirection of weight in [0.1, 1].
            let j = (0..d)
                .filter(|&j| !inside(p.spectrum[j]))
                .nth(rng.random_range(0..above))?;
            let mut x = p.vector_in(inside, rng);
            x.axpy(T::from_real(rng.random_range(0.1..=1.0)), &p.q.vector(j));
            (x, false)
        }
        3 if above > 0 => (p.vector_in(|s| !inside(s), rng), false),
        _ => return None,
    };
    let verdict = membership(&p.a, lambda, &x, DEFAULT_REL_TOL, DEFAULT_M_MAX).unwrap();
    Some(verdict.member == expected)
}

#[test]
fn membership_agrees_with_planted_eigenbasis() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut cases, mut disagreements) = (0usize, 0usize);
    let mut round = 0usize;
    while cases < 1200 {
        let class = round % 4;
        let outcome = if round.is_multiple_of(2) {
            agreement_round::<f64>(&mut rng, class)
        } else {
            agreement_round::<Complex64>(&mut rng, class)
        };
        round += 1;
        if let Some(ok) = outcome {
            cases += 1;
            disagreements += usize::from(!ok);
        }
    }
    assert_eq!(
        disagreements, 0,
        "{disagreements} of {cases} verdicts disagree"
    );
}

#[test]
fn subspace_matches_planted_projector() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let spectrum = gapped_spectrum(8, -4.0, 4.0, 1e-3, &mut rng);
        let p = Planted::<Complex64>::new(spectrum, &mut rng);
        let mut abs: Vec<f64> = p.spectrum.iter().map(|s| s.abs()).collect();
        abs.sort_by(f64::total_cmp);
        // Median of |μ|, nudged into a gap when two absolute values nearly coincide.
        let lambda = 0.5 * (abs[3] + abs[4]);
        if abs[4] - abs[3] < 2e-6 {
            continue;
        }
        let f = subspace(&p.a, lambda).unwrap();
        let oracle = p.projector(|s| s.abs() <= lambda);
        assert!(
            f.projector.as_mat().distance(&oracle) <= 1e-8,
            "case {case}"
        );
        assert_eq!(f.dim(), 4);
    }
}

#[test]
fn subspaces_are_invariant_under_polynomials_in_a() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let d = rng.random_range(2..=10);
        let spectrum = gapped_spectrum(d, -3.0, 3.0, 1e-4, &mut rng);
        let p = Planted::<Complex64>::new(spectrum, &mut rng);
        let a = p.a.as_mat();
        let coeffs: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut c = Mat::identity(d).scaled_real(coeffs[0]);
        let mut power = Mat::identity(d);
        for &w in &coeffs[1..] {
            power = power.matmul(a);
            c = &c + &power.scaled_real(w);
        }
        let builder = SubspaceBuilder::new(&p.a).unwrap();
        for lambda in p.distinct().iter().map(|s| s.abs()) {
            let f = builder.at(lambda).unwrap();
            assert!(f.invariance_defect(a) <= 1e-9 * p.a.frobenius_norm());
            assert!(f.invariance_defect(&c) <= 1e-9 * c.frobenius_norm().max(1e-300));
        }
    }
}

#[test]
fn subspaces_grow_with_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let d = rng.random_range(2..=10);
        let spectrum: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p = Planted::<f64>::new(spectrum, &mut rng);
        let builder = SubspaceBuilder::new(&p.a).unwrap();
        let mut levels: Vec<f64> = p.spectrum.iter().map(|s| s.abs()).collect();
        levels.extend((0..5).map(|_| rng.random_range(0.0..2.5)));
        levels.sort_by(f64::total_cmp);
        let projectors: Vec<_> = levels
            .iter()
            .map(|&l| builder.at(l).unwrap().projector)
            .collect();
        for w in projectors.windows(2) {
            assert!(w[1].contains(&w[0], 1e-10));
        }
    }
}

#[test]
fn kernel_membership_at_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = Planted::<Complex64>::new(vec![0.0, 0.0, 1.0, -2.0], &mut rng);
    let x = p.vector_in(|s| s == 0.0, &mut rng);
    assert!(
        membership(&p.a, 0.0, &x, DEFAULT_REL_TOL, DEFAULT_M_MAX)
            .unwrap()
            .member
    );
    let y = &x + &p.q.vector(2);
    assert!(
        !membership(&p.a, 0.0, &y, DEFAULT_REL_TOL, DEFAULT_M_MAX)
            .unwrap()
            .member
    );
    assert_eq!(
        membership(&p.a, 0.0, &Vector::zeros(4), DEFAULT_REL_TOL, DEFAULT_M_MAX),
        Err(specfam::Error::ZeroVector)
    );
}
