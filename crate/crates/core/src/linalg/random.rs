//! Seeded random operators for tests and the operator gallery.

use rand::Rng;

use super::matrix::{HermitianMatrix, Mat};
use super::ortho::{orthonormalize, OrthoBasis};
use super::scalar::Scalar;
use super::vector::Vector;

/// Haar-like unitary from orthonormalized Gaussian columns.
pub fn random_unitary<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> OrthoBasis<T> {
    loop {
        let columns: Vec<Vector<T>> = (0..dim).map(|_| Vector::random(dim, rng)).collect();
        let q = orthonormalize(dim, &columns);
        if q.rank() == dim {
            return q;
        }
    }
}

/// `Q diag(spectrum) Q*` with a random unitary `Q`.
pub fn with_spectrum<T: Scalar, R: Rng + ?Sized>(
    spectrum: &[f64],
    rng: &mut R,
) -> HermitianMatrix<T> {
    let q = random_unitary::<T, R>(spectrum.len(), rng);
    conjugate_diagonal(&q, spectrum)
}

/// `Q diag(spectrum) Q*` for a given unitary `Q`.
pub fn conjugate_diagonal<T: Scalar>(q: &OrthoBasis<T>, spectrum: &[f64]) -> HermitianMatrix<T> {
    let q = q.as_mat();
    let d = spectrum.len();
    let scaled = Mat::from_fn(d, d, |i, j| q[(i, j)].scale(spectrum[j]));
    HermitianMatrix::new(scaled.matmul(&q.adjoint())).expect("square product")
}

/// Gaussian Hermitian matrix with entries of unit variance.
pub fn random_hermitian<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix<T> {
    let m = Mat::from_fn(dim, dim, |_, _| T::gaussian(rng));
    HermitianMatrix::new(m).expect("square random matrix")
}
