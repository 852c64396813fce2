use super::matrix::Mat;
use super::scalar::Scalar;
use super::vector::Vector;

/// Residuals below this fraction of the largest input norm are treated as
/// linearly dependent.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Orthonormal columns spanning a subspace of `C^dim` (or `R^dim`).
///
/// The empty basis represents the zero subspace and still records `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis<T: Scalar> {
    columns: Mat<T>,
}

impl<T: Scalar> OrthoBasis<T> {
    pub fn empty(dim: usize) -> Self {
        Self {
            columns: Mat::zeros(dim, 0),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            columns: Mat::identity(dim),
        }
    }

    /// Wraps columns the caller knows to be orthonormal.
    pub(crate) fn from_columns_unchecked(columns: Mat<T>) -> Self {
        Self { columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn rank(&self) -> usize {
        self.columns.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.columns
    }

    pub fn vector(&self, j: usize) -> Vector<T> {
        self.columns.column(j)
    }

    pub fn vectors(&self) -> Vec<Vector<T>> {
        self.columns.columns()
    }

    /// `V c` for a coefficient vector of length `rank`.
    pub fn combine(&self, coefficients: &Vector<T>) -> Vector<T> {
        self.columns.matvec(coefficients)
    }

    /// Largest entrywise deviation of `V* V` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.columns.adjoint().matmul(&self.columns);
        (&gram - &Mat::identity(self.rank())).max_abs()
    }

    /// Columns of `self` followed by the columns of `other`.
    pub fn concat(&self, other: &Self) -> Mat<T> {
        assert_eq!(self.dim(), other.dim());
        let (k1, k2) = (self.rank(), other.rank());
        Mat::from_fn(self.dim(), k1 + k2, |i, j| {
            if j < k1 {
                self.columns[(i, j)]
            } else {
                other.columns[(i, j - k1)]
            }
        })
    }
}

/// Orthonormal basis of `span(vectors)` in ambient dimension `dim`, by
/// modified Gram-Schmidt with one full re-orthogonalization pass per vector.
pub fn orthonormalize<T: Scalar>(dim: usize, vectors: &[Vector<T>]) -> OrthoBasis<T> {
    let max_norm = vectors.iter().map(Vector::norm).fold(0.0, f64::max);
    let threshold = DROP_TOLERANCE * max_norm;
    let mut accepted: Vec<Vector<T>> = Vec::new();
    for v in vectors {
        assert_eq!(v.len(), dim, "vector length mismatch");
        if accepted.len() == dim {
            break;
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &accepted {
                let coeff = w.dot_unchecked(q);
                w.axpy(-coeff, q);
            }
        }
        let norm = w.norm();
        if norm > threshold && norm > 0.0 {
            accepted.push(w.scaled_real(1.0 / norm));
        }
    }
    OrthoBasis::from_columns_unchecked(Mat::from_columns(dim, &accepted))
}
