use super::matrix::{HermitianMatrix, Mat};
use super::ortho::OrthoBasis;
use super::scalar::Scalar;
use super::vector::Vector;

/// Idempotence allowance per unit of dimension: `||P^2 - P||_F <= 1e-10 * d`.
pub const IDEMPOTENCE_TOLERANCE: f64 = 1e-10;

/// Orthogonal projector, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T: Scalar> {
    matrix: HermitianMatrix<T>,
}

impl<T: Scalar> Projector<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(dim),
        }
    }

    /// Wraps a matrix the caller knows to be (numerically) a projector.
    pub(crate) fn from_hermitian_unchecked(matrix: HermitianMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn as_mat(&self) -> &Mat<T> {
        self.matrix.as_mat()
    }

    pub fn apply(&self, x: &Vector<T>) -> Vector<T> {
        self.matrix.apply(x)
    }

    /// `rank = trace(P)`, rounded.
    pub fn rank(&self) -> usize {
        self.matrix.as_mat().trace().re().round().max(0.0) as usize
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        let id = HermitianMatrix::identity(self.dim());
        Self::from_hermitian_unchecked(id.sub(&self.matrix))
    }

    /// `||P^2 - P||_F`.
    pub fn idempotence_defect(&self) -> f64 {
        let p = self.as_mat();
        p.matmul(p).distance(p)
    }

    /// `||P - P*||_F`; zero by construction.
    pub fn adjointness_defect(&self) -> f64 {
        self.as_mat().distance(&self.as_mat().adjoint())
    }

    /// `||self * other - other||_F`, which vanishes iff `range(other)` is
    /// contained in `range(self)`.
    pub fn order_defect(&self, smaller: &Self) -> f64 {
        self.as_mat()
            .matmul(smaller.as_mat())
            .distance(smaller.as_mat())
    }

    /// Projector order `smaller <= self` within `tolerance`.
    pub fn contains(&self, smaller: &Self, tolerance: f64) -> bool {
        self.order_defect(smaller) <= tolerance
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.as_mat().distance(other.as_mat())
    }

    pub(crate) fn sum(&self, other: &Self) -> Self {
        Self::from_hermitian_unchecked(self.matrix.add(&other.matrix))
    }

    pub(crate) fn difference(&self, other: &Self) -> Self {
        Self::from_hermitian_unchecked(self.matrix.sub(&other.matrix))
    }
}

/// `P = V V*`.
pub fn projector_from_basis<T: Scalar>(basis: &OrthoBasis<T>) -> Projector<T> {
    let v = basis.as_mat();
    let p = v.matmul(&v.adjoint());
    Projector::from_hermitian_unchecked(HermitianMatrix::new(p).expect("square projector"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ortho::orthonormalize;

    #[test]
    fn first_axis() {
        let b = orthonormalize(2, &[Vector::<f64>::unit(2, 0)]);
        let p = projector_from_basis(&b);
        assert_eq!(p.as_mat(), &Mat::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn full_basis_gives_identity() {
        let p = projector_from_basis(&OrthoBasis::<f64>::identity(3));
        assert_eq!(p.as_mat(), &Mat::identity(3));
    }

    #[test]
    fn diagonal_direction_gives_halves() {
        let b = orthonormalize(2, &[Vector::<f64>::from_reals(&[1.0, 1.0])]);
        let p = projector_from_basis(&b);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.as_mat()[(i, j)] - 0.5).abs() < 1e-15);
            }
        }
        assert!(p.idempotence_defect() <= IDEMPOTENCE_TOLERANCE * 2.0);
        assert_eq!(p.adjointness_defect(), 0.0);
    }

    #[test]
    fn empty_basis_gives_zero() {
        let p = projector_from_basis(&OrthoBasis::<f64>::empty(4));
        assert_eq!(p, Projector::zero(4));
        assert_eq!(p.rank(), 0);
    }
}
