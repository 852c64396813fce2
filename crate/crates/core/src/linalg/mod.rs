//! Dense self-adjoint linear algebra over real or complex scalars.

pub mod eigen;
pub mod matrix;
pub mod ortho;
pub mod projector;
pub mod random;
pub mod scalar;
pub mod solve;
pub mod vector;

pub use eigen::{eigen_oracle, EigenDecomposition};
pub use matrix::{HermitianMatrix, Mat};
pub use ortho::{orthonormalize, OrthoBasis};
pub use projector::{projector_from_basis, Projector};
pub use scalar::{FieldMode, Scalar};
pub use solve::Cholesky;
pub use vector::Vector;

/// `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner<T: Scalar>(x: &Vector<T>, y: &Vector<T>) -> crate::Result<T> {
    x.inner(y)
}
