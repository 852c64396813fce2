#![allow(dead_code)]

use rand::Rng;
use specfam::linalg::random::{conjugate_diagonal, random_unitary};
use specfam::linalg::{HermitianMatrix, Mat, OrthoBasis, Scalar, Vector};

/// An operator with a known eigenbasis, so oracle projectors need no solver.
pub struct Planted<T: Scalar> {
    pub a: HermitianMatrix<T>,
    pub q: OrthoBasis<T>,
    pub spectrum: Vec<f64>,
}

impl<T: Scalar> Planted<T> {
    pub fn new<R: Rng + ?Sized>(spectrum: Vec<f64>, rng: &mut R) -> Self {
        let q = random_unitary(spectrum.len(), rng);
        let a = conjugate_diagonal(&q, &spectrum);
        Self { a, q, spectrum }
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    /// `Σ_{keep(s_j)} q_j q_j*`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> Mat<T> {
        let d = self.dim();
        let q = self.q.as_mat();
        Mat::from_fn(d, d, |r, c| {
            (0..d)
                .filter(|&j| keep(self.spectrum[j]))
                .map(|j| q[(r, j)] * q[(c, j)].conj())
                .sum()
        })
    }

    /// Random combination of the eigenvectors selected by `keep`.
    pub fn vector_in<R: Rng + ?Sized>(&self, keep: impl Fn(f64) -> bool, rng: &mut R) -> Vector<T> {
        let coeffs: Vec<T> = self
            .spectrum
            .iter()
            .map(|&s| if keep(s) { T::gaussian(rng) } else { T::zero() })
            .collect();
        self.q.combine(&Vector::new(coeffs))
    }

    /// Distinct eigenvalues in ascending order.
    pub fn distinct(&self) -> Vec<f64> {
        let mut s = self.spectrum.clone();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }

    /// Midpoints between consecutive distinct eigenvalues.
    pub fn midpoints(&self) -> Vec<f64> {
        self.distinct()
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }
}

/// `dim` values uniform in `[lo, hi]` with pairwise gaps of at least `gap`.
pub fn gapped_spectrum<R: Rng + ?Sized>(
    dim: usize,
    lo: f64,
    hi: f64,
    gap: f64,
    rng: &mut R,
) -> Vec<f64> {
    loop {
        let mut s: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
        s.sort_by(f64::total_cmp);
        if s.windows(2).all(|w| w[1] - w[0] >= gap) {
            return s;
        }
    }
}

/// Integer spectrum with repeats, which exercises multi-rank jumps.
pub fn degenerate_spectrum<R: Rng + ?Sized>(dim: usize, lo: i32, hi: i32, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(lo..=hi) as f64).collect()
}

/// Indefinite spectrum with no eigenvalue in `(-1e-6, 1e-6)`.
pub fn indefinite_spectrum<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let s: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
        let has_both = s.iter().any(|&v| v < 0.0) && s.iter().any(|&v| v > 0.0);
        if has_both && s.iter().all(|v: &f64| v.abs() >= 1e-6) {
            return s;
        }
    }
}

pub fn real_or_complex(i: usize) -> bool {
    i.is_multiple_of(2)
}
