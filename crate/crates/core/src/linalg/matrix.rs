use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::scalar::Scalar;
use super::vector::Vector;
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                actual: bad.len(),
            });
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.concat(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| T::from_real(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = T::from_real(v);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vector<T>]) -> Self {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), dim, "column length mismatch");
            for i in 0..dim {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn columns(&self) -> Vec<Vector<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.scale(factor)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += T::from_real(shift);
        }
        m
    }

    pub fn matvec(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        Vector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(x.iter()).map(|(&a, &b)| a * b).sum())
                .collect(),
        )
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: Self) -> Mat<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: Self) -> Mat<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Self) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Mul<&Vector<T>> for &Mat<T> {
    type Output = Vector<T>;
    fn mul(self, rhs: &Vector<T>) -> Vector<T> {
        self.matvec(rhs)
    }
}

/// Dense self-adjoint matrix: `entry(i, j) == conj(entry(j, i))` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Scalar> {
    inner: Mat<T>,
}

impl<T: Scalar> HermitianMatrix<T> {
    /// Symmetrizes `(M + M*) / 2` and returns the relative defect
    /// `||M - M*||_F / ||M||_F` that was removed (zero for the zero matrix).
    pub fn symmetrize(m: &Mat<T>) -> Result<(Self, f64)> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let d = m.rows();
        for i in 0..d {
            for j in 0..d {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let mut out = Mat::zeros(d, d);
        let mut defect_sqr = 0.0;
        for i in 0..d {
            out[(i, i)] = T::from_real(m[(i, i)].re());
            defect_sqr += 4.0 * m[(i, i)].im() * m[(i, i)].im();
            for j in 0..i {
                let upper = m[(j, i)];
                let lower = m[(i, j)];
                defect_sqr += 2.0 * (lower - upper.conj()).abs_sqr();
                let avg = (lower + upper.conj()).scale(0.5);
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        let norm = m.frobenius_norm();
        let defect = if norm > 0.0 {
            defect_sqr.sqrt() / norm
        } else {
            0.0
        };
        Ok((Self { inner: out }, defect))
    }

    /// Symmetrizes and discards the defect.
    pub fn new(m: Mat<T>) -> Result<Self> {
        Self::symmetrize(&m).map(|(h, _)| h)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(Mat::from_real_rows(rows)?)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(Mat::diagonal(values))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: Mat::identity(dim),
        }
    }

    /// Wraps a matrix whose caller guarantees exact self-adjointness.
    pub(crate) fn from_mat_unchecked(inner: Mat<T>) -> Self {
        debug_assert!(inner.is_square());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.inner
    }

    pub fn into_mat(self) -> Mat<T> {
        self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn apply(&self, x: &Vector<T>) -> Vector<T> {
        self.inner.matvec(x)
    }

    /// `<A x, x>`; real for self-adjoint A.
    pub fn quadratic_form(&self, x: &Vector<T>) -> f64 {
        self.apply(x).dot_unchecked(x).re()
    }

    pub fn shifted(&self, shift: f64) -> Self {
        Self::from_mat_unchecked(self.inner.shifted(shift))
    }

    pub fn negated(&self) -> Self {
        Self::from_mat_unchecked(self.inner.scaled_real(-1.0))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_mat_unchecked(self.inner.scaled_real(factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_mat_unchecked(&self.inner + &other.inner)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_mat_unchecked(&self.inner - &other.inner)
    }

    /// `A^2`, re-symmetrized to remove rounding asymmetry.
    pub fn square(&self) -> Self {
        Self::new(self.inner.matmul(&self.inner)).expect("square of a valid matrix")
    }

    /// `V* A V` for a column matrix `V`.
    pub fn compress(&self, v: &Mat<T>) -> Self {
        let av = self.inner.matmul(v);
        Self::new(v.adjoint().matmul(&av)).expect("compression of a valid matrix")
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.inner[(i, j)]
    }
}

impl<T: Scalar> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = T;
    fn index(&self, index: (usize, usize)) -> &T {
        &self.inner[index]
    }
}
