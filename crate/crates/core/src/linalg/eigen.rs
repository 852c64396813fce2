//! Cyclic Jacobi eigendecomposition for dense self-adjoint matrices.
//!
//! This is the brute-force reference every other construction in the crate is
//! compared against. It is slow (O(d^3) per sweep) but unconditionally
//! convergent and needs nothing beyond complex arithmetic.

use super::matrix::{HermitianMatrix, Mat};
use super::ortho::OrthoBasis;
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass, relative to `||A||_F`, that ends the sweeps.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T: Scalar> {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` belongs to `eigenvalues[j]`.
    pub eigenvectors: OrthoBasis<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(diag(mu)) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix<T> {
        let v = self.eigenvectors.as_mat();
        let d = self.dim();
        let mut scaled = v.clone();
        for j in 0..d {
            let w = f(self.eigenvalues[j]);
            for i in 0..d {
                scaled[(i, j)] = scaled[(i, j)].scale(w);
            }
        }
        HermitianMatrix::new(scaled.matmul(&v.adjoint())).expect("square reconstruction")
    }

    pub fn reconstruct(&self) -> HermitianMatrix<T> {
        self.reconstruct_with(|mu| mu)
    }

    /// `||A V - V diag(mu)||_F`.
    pub fn residual(&self, a: &HermitianMatrix<T>) -> f64 {
        let v = self.eigenvectors.as_mat();
        let av = a.as_mat().matmul(v);
        let vd = Mat::from_fn(self.dim(), self.dim(), |i, j| {
            v[(i, j)].scale(self.eigenvalues[j])
        });
        av.distance(&vd)
    }

    /// Orthonormal eigenvectors whose eigenvalue satisfies `keep`.
    pub fn select(&self, keep: impl Fn(f64) -> bool) -> OrthoBasis<T> {
        let d = self.dim();
        let chosen: Vec<usize> = (0..d).filter(|&j| keep(self.eigenvalues[j])).collect();
        let v = self.eigenvectors.as_mat();
        OrthoBasis::from_columns_unchecked(Mat::from_fn(d, chosen.len(), |i, k| v[(i, chosen[k])]))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }
}

fn off_diagonal_mass<T: Scalar>(m: &Mat<T>) -> f64 {
    let d = m.rows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m[(i, j)].abs_sqr();
            }
        }
    }
    s.sqrt()
}

/// Rotation `(c, s)` that annihilates the off-diagonal entry of the real
/// symmetric block `[[app, r], [r, aqq]]` with `r > 0`.
fn rotation(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    (c, t * c)
}

pub fn eigen_oracle<T: Scalar>(a: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let d = a.dim();
    let norm = a.frobenius_norm();
    let target = OFF_DIAGONAL_TOLERANCE * norm;
    let mut m = a.as_mat().clone();
    let mut v = Mat::<T>::identity(d);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_mass(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[(p, q)];
                let r = apq.abs();
                if r == 0.0 {
                    continue;
                }
                // With phase = apq / |apq|, D = diag(1, conj(phase)) makes the
                // (p, q) block real; U = D R then diagonalizes it.
                let phase = apq.phase();
                let (c, s) = rotation(m[(p, p)].re(), m[(q, q)].re(), r);
                let (c, s) = (T::from_real(c), T::from_real(s));
                let u_pp = c;
                let u_pq = s;
                let u_qp = -s * phase.conj();
                let u_qq = c * phase.conj();

                // M <- M U (columns p, q)
                for k in 0..d {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * u_pp + mkq * u_qp;
                    m[(k, q)] = mkp * u_pq + mkq * u_qq;
                }
                // M <- U* M (rows p, q)
                for k in 0..d {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                    m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                }
                m[(p, q)] = T::zero();
                m[(q, p)] = T::zero();
                m[(p, p)] = T::from_real(m[(p, p)].re());
                m[(q, q)] = T::from_real(m[(q, q)].re());
                // V <- V U
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged {
        let residual = off_diagonal_mass(&m);
        if residual > target {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[(i, i)].re().total_cmp(&m[(j, j)].re()));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re()).collect();
    let vectors = Mat::from_fn(d, d, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: OrthoBasis::from_columns_unchecked(vectors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_input_sorted() {
        let a = HermitianMatrix::<f64>::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let e = eigen_oracle(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn swap_matrix() {
        let a = HermitianMatrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eigen_oracle(&a).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let e = eigen_oracle(&HermitianMatrix::<Complex64>::zeros(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        assert_eq!(e.eigenvectors.as_mat(), &Mat::identity(3));
    }

    fn check_residuals<T: Scalar>(a: &HermitianMatrix<T>) {
        let e = eigen_oracle(a).unwrap();
        let d = a.dim() as f64;
        let norm = a.frobenius_norm();
        assert!(e.residual(a) <= 1e-9 * d * norm);
        assert!(e.eigenvectors.orthonormality_defect() <= 1e-10);
        assert!(e.reconstruct().as_mat().distance(a.as_mat()) <= 1e-9 * d * norm);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn random_8x8_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        check_residuals(&random_hermitian::<f64, _>(8, &mut rng));
        check_residuals(&random_hermitian::<Complex64, _>(8, &mut rng));
    }
}
