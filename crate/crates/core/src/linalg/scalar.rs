use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Which Hilbert space a matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Real,
    Complex,
}

impl std::fmt::Display for FieldMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldMode::Real => f.write_str("real"),
            FieldMode::Complex => f.write_str("complex"),
        }
    }
}

/// Field of matrix entries. Implemented for `f64` (real Hilbert spaces) and
/// `Complex64` (complex Hilbert spaces); the real case is a genuine
/// specialization and never carries an imaginary part.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
{
    const MODE: FieldMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(value: f64) -> Self;
    /// `None` when `im != 0` in the real field.
    fn from_parts(re: f64, im: f64) -> Option<Self>;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn abs_sqr(self) -> f64;
    fn scale(self, factor: f64) -> Self;
    /// Standard Gaussian sample; complex samples have unit total variance.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Unimodular weights `u` of the polarization identity
    /// `<x, y> = 1/4 * sum_u u * ||x + u y||^2`.
    fn polarization_units() -> &'static [Self];

    /// Unit-modulus factor `self / |self|`, or one at zero.
    fn phase(self) -> Self {
        let a = self.abs();
        if a == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / a)
        }
    }

    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }
}

impl Scalar for f64 {
    const MODE: FieldMode = FieldMode::Real;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(value: f64) -> Self {
        value
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn polarization_units() -> &'static [Self] {
        &[1.0, -1.0]
    }
}

static COMPLEX_UNITS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

impl Scalar for Complex64 {
    const MODE: FieldMode = FieldMode::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(value: f64) -> Self {
        Complex64::new(value, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex64::new(re, im))
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, factor: f64) -> Self {
        Complex64::new(self.re * factor, self.im * factor)
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im).scale(std::f64::consts::FRAC_1_SQRT_2)
    }
    fn polarization_units() -> &'static [Self] {
        &COMPLEX_UNITS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_is_an_involution() {
        let z = Complex64::new(1.5, -2.25);
        assert_eq!(Scalar::conj(Scalar::conj(z)), z);
        assert_eq!(Scalar::conj(3.0f64), 3.0);
        assert_eq!(Scalar::im(7.0f64), 0.0);
    }

    #[test]
    fn real_field_rejects_imaginary_parts() {
        assert_eq!(<f64 as Scalar>::from_parts(2.0, 0.0), Some(2.0));
        assert_eq!(<f64 as Scalar>::from_parts(2.0, 1.0), None);
    }

    #[test]
    fn phase_is_unimodular() {
        let z = Complex64::new(3.0, 4.0);
        assert!((Scalar::abs(z.phase()) - 1.0).abs() < 1e-15);
        assert_eq!((-2.0f64).phase(), -1.0);
        assert_eq!(0.0f64.phase(), 1.0);
    }
}
