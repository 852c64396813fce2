use super::matrix::{HermitianMatrix, Mat};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `A = L L*`.
#[derive(Debug, Clone)]
pub struct Cholesky<T: Scalar> {
    lower: Mat<T>,
}

impl<T: Scalar> Cholesky<T> {
    pub fn factor(a: &HermitianMatrix<T>) -> Result<Self> {
        let d = a.dim();
        let mut l = Mat::<T>::zeros(d, d);
        for j in 0..d {
            let mut diag = a[(j, j)].re();
            for k in 0..j {
                diag -= l[(j, k)].abs_sqr();
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    pivot: j,
                    value: diag,
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = T::from_real(ljj);
            for i in (j + 1)..d {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s.scale(1.0 / ljj);
            }
        }
        Ok(Self { lower: l })
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, rhs: &Mat<T>) -> Mat<T> {
        let d = self.lower.rows();
        assert_eq!(rhs.rows(), d, "right-hand side row mismatch");
        let l = &self.lower;
        let mut x = rhs.clone();
        for col in 0..rhs.cols() {
            // L y = b
            for i in 0..d {
                let mut s = x[(i, col)];
                for k in 0..i {
                    s -= l[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = s.scale(1.0 / l[(i, i)].re());
            }
            // L* x = y
            for i in (0..d).rev() {
                let mut s = x[(i, col)];
                for k in (i + 1)..d {
                    s -= l[(k, i)].conj() * x[(k, col)];
                }
                x[(i, col)] = s.scale(1.0 / l[(i, i)].re());
            }
        }
        x
    }
}
