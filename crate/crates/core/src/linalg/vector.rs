use std::ops::{Add, Index, IndexMut, Sub};

use rand::Rng;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Element of a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T: Scalar> {
    entries: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| T::from_real(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim])
    }

    /// Standard basis vector `e_index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = T::one();
        v
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self::new((0..dim).map(|_| T::gaussian(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.entries
    }

    pub fn into_inner(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    /// `<self, other>`, linear in `self` and conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|v| v.abs_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::new(self.entries.iter().map(|&v| v * factor).collect())
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        Self::new(self.entries.iter().map(|&v| v.scale(factor)).collect())
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: T, other: &Self) {
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled_real(1.0 / n))
    }
}

impl<T: Scalar> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, index: usize) -> &T {
        &self.entries[index]
    }
}

impl<T: Scalar> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, index: usize) -> &mut T {
        &mut self.entries[index]
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector::new(self.iter().zip(rhs.iter()).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector::new(self.iter().zip(rhs.iter()).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Scalar> From<Vec<T>> for Vector<T> {
    fn from(entries: Vec<T>) -> Self {
        Self::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn inner_of_axes() {
        let e1 = Vector::<f64>::unit(2, 0);
        let e2 = Vector::<f64>::unit(2, 1);
        assert_eq!(e1.inner(&e1).unwrap(), 1.0);
        assert_eq!(e1.inner(&e2).unwrap(), 0.0);
    }

    #[test]
    fn inner_is_conjugate_linear_in_second_slot() {
        let i = Complex64::new(0.0, 1.0);
        let x = Vector::new(vec![Complex64::new(1.0, 0.0), i]);
        let y = Vector::new(vec![i, Complex64::new(1.0, 0.0)]);
        // 1 * conj(i) + i * 1 = -i + i
        assert_eq!(x.inner(&y).unwrap(), Complex64::new(0.0, 0.0));
        let z = Vector::new(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)]);
        let zx = z.inner(&x).unwrap();
        let xz = x.inner(&z).unwrap();
        assert_eq!(zx, xz.conj());
    }

    #[test]
    fn inner_rejects_length_mismatch() {
        let a = Vector::<f64>::zeros(2);
        let b = Vector::<f64>::zeros(3);
        assert_eq!(
            a.inner(&b),
            Err(Error::DimensionMismatch {
                expected: 2,
                actual: 3
            })
        );
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        assert_eq!(Vector::<Complex64>::zeros(4).norm(), 0.0);
        assert!(Vector::<f64>::zeros(3).normalized().is_none());
    }
}
