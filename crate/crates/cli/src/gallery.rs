//! Test operators. The second-difference families grow like `dim²`, which
//! makes a dimension sweep a desk-scale stand-in for an unbounded operator.

use std::path::PathBuf;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use specfam::linalg::random::{conjugate_diagonal, random_unitary};
use specfam::linalg::{FieldMode, HermitianMatrix, Mat, Scalar};

use crate::error::{CliError, Result};
use crate::market::read_matrix_market;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Laplacian1d,
    Oscillator,
    Random,
    Diagonal,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub dim: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spectrum: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub mode: FieldMode,
}

/// A generated operator in whichever field the spec asked for.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Real(HermitianMatrix<f64>),
    Complex(HermitianMatrix<Complex64>),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Real(a) => a.dim(),
            Operator::Complex(a) => a.dim(),
        }
    }
}

/// Input facts that only become known while loading, such as a file's
/// symmetrization defect.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LoadInfo {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetrization_defect: Option<f64>,
}

/// `dim² · tridiag(-1, 2, -1)`.
pub fn laplacian1d<T: Scalar>(dim: usize) -> HermitianMatrix<T> {
    let h2 = (dim * dim) as f64;
    let m = Mat::from_fn(dim, dim, |i, j| match i.abs_diff(j) {
        0 => T::from_real(2.0 * h2),
        1 => T::from_real(-h2),
        _ => T::zero(),
    });
    HermitianMatrix::new(m).expect("square")
}

/// Laplacian plus the potential `grid_i²` on `grid_i = (i - dim/2) / sqrt(dim)`.
pub fn oscillator<T: Scalar>(dim: usize) -> HermitianMatrix<T> {
    let potential: Vec<f64> = (0..dim)
        .map(|i| {
            let g = (i as f64 - dim as f64 / 2.0) / (dim as f64).sqrt();
            g * g
        })
        .collect();
    laplacian1d::<T>(dim).add(&HermitianMatrix::diagonal(&potential).expect("finite"))
}

/// `Q diag(u) Q*` with `u` uniform in `[-1, 1]`, reproducible from `seed`.
pub fn random_operator<T: Scalar>(dim: usize, seed: u64) -> HermitianMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let q = random_unitary::<T, _>(dim, &mut rng);
    conjugate_diagonal(&q, &u)
}

fn build<T: Scalar>(spec: &OperatorSpec) -> Result<(HermitianMatrix<T>, LoadInfo)> {
    let d = spec.dim;
    let a = match spec.kind {
        OperatorKind::Laplacian1d => laplacian1d(d),
        OperatorKind::Oscillator => oscillator(d),
        OperatorKind::Random => random_operator(d, spec.seed),
        OperatorKind::Diagonal => HermitianMatrix::diagonal(&spec.spectrum)?,
        OperatorKind::File => {
            let path = spec.path.as_ref().expect("validated");
            let m = read_matrix_market(path)?;
            let a = m.to_hermitian()?;
            let info = LoadInfo {
                dim: a.dim(),
                symmetrization_defect: Some(m.defect),
            };
            return Ok((a, info));
        }
    };
    Ok((
        a,
        LoadInfo {
            dim: d,
            symmetrization_defect: None,
        },
    ))
}

impl OperatorSpec {
    /// Checks the fields each kind needs.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            OperatorKind::File if self.path.is_none() => {
                Err(CliError::Spec("kind `file` needs --input".into()))
            }
            OperatorKind::Diagonal if self.spectrum.is_empty() => {
                Err(CliError::Spec("kind `diagonal` needs --spectrum".into()))
            }
            OperatorKind::Diagonal if self.dim != self.spectrum.len() => {
                Err(CliError::Spec(format!(
                    "--dim {} disagrees with a spectrum of length {}",
                    self.dim,
                    self.spectrum.len()
                )))
            }
            OperatorKind::File => Ok(()),
            _ if self.dim == 0 => Err(CliError::Spec("--dim must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<(Operator, LoadInfo)> {
        self.validate()?;
        Ok(match self.mode {
            FieldMode::Real => {
                let (a, info) = build::<f64>(self)?;
                (Operator::Real(a), info)
            }
            FieldMode::Complex => {
                let (a, info) = build::<Complex64>(self)?;
                (Operator::Complex(a), info)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use specfam::linalg::eigen_oracle;

    fn spec(kind: OperatorKind, dim: usize) -> OperatorSpec {
        OperatorSpec {
            kind,
            dim,
            seed: 7,
            spectrum: Vec::new(),
            path: None,
            mode: FieldMode::Real,
        }
    }

    #[test]
    fn diagonal_kind() {
        let s = OperatorSpec {
            spectrum: vec![-1.0, 2.0],
            ..spec(OperatorKind::Diagonal, 2)
        };
        let (op, _) = s.generate().unwrap();
        assert_eq!(
            op,
            Operator::Real(HermitianMatrix::diagonal(&[-1.0, 2.0]).unwrap())
        );
    }

    #[test]
    fn two_point_laplacian() {
        let a = laplacian1d::<f64>(2);
        let e = eigen_oracle(&a).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues[1], 12.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillator_adds_potential() {
        let a = oscillator::<f64>(4);
        let l = laplacian1d::<f64>(4);
        // grid = (-1, -0.5, 0, 0.5)
        for (i, g) in [-1.0f64, -0.5, 0.0, 0.5].iter().enumerate() {
            assert_eq!(a[(i, i)] - l[(i, i)], g * g);
        }
    }

    #[test]
    fn random_kind_is_deterministic() {
        let s = OperatorSpec {
            mode: FieldMode::Complex,
            ..spec(OperatorKind::Random, 6)
        };
        assert_eq!(s.generate().unwrap(), s.generate().unwrap());
        let other = OperatorSpec {
            seed: 8,
            ..s.clone()
        };
        assert_ne!(s.generate().unwrap(), other.generate().unwrap());
        if let (Operator::Complex(a), _) = s.generate().unwrap() {
            let e = eigen_oracle(&a).unwrap();
            assert!(e.spectral_radius() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn bad_specs() {
        assert!(spec(OperatorKind::Laplacian1d, 0).generate().is_err());
        assert!(spec(OperatorKind::Diagonal, 2).generate().is_err());
        assert!(spec(OperatorKind::File, 2).generate().is_err());
        let mismatched = OperatorSpec {
            spectrum: vec![1.0],
            ..spec(OperatorKind::Diagonal, 3)
        };
        assert!(mismatched.generate().is_err());
    }
}
