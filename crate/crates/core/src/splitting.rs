//! Splitting of a self-adjoint `A` into a non-positive and a non-negative part.
//!
//! `B = A (1 + A²)⁻¹` is bounded by 1/2 and has the sign of `A` on every
//! eigenvector, so `E = P_{F(B + β, β)}` for `β >= 1/2 + 1` projects onto the
//! part where `B <= 0`. Both ranges reduce `A`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    eigen_oracle, Cholesky, HermitianMatrix, Mat, OrthoBasis, Projector, Scalar, Vector,
};
use crate::subspace::{random_in, CheckOutcome, SubspaceBuilder};

pub const DEFAULT_BETA: f64 = 1.5;
/// `‖B‖ <= 1/2` up to this absolute slack.
pub const TRANSFORM_NORM_SLACK: f64 = 1e-12;
pub const COMMUTATION_TOL: f64 = 1e-10;
/// Relative to `‖A‖_F`.
pub const REDUCING_TOL: f64 = 1e-9;
pub const SPECTRA_TOL: f64 = 1e-8;
/// Relative to `‖A‖_F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Relative to `‖A‖_F`.
pub const SIGN_TOL: f64 = 1e-9;
/// Absolute, for `⟨Bx, x⟩ / ‖x‖²`.
pub const TRANSFORM_SIGN_TOL: f64 = 1e-10;
/// Relative to `(1 + ‖A‖_F²) ‖x‖²`.
pub const FORM_IDENTITY_TOL: f64 = 1e-9;

const REFINEMENT_STEPS: usize = 2;

/// `B = A (I + A²)⁻¹` via a Cholesky solve of `(I + A²) B = A`.
pub fn bounded_transform<T: Scalar>(a: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let d = a.dim();
    let chol = Cholesky::factor(&a.square().shifted(1.0))?;
    // A commutes with I + A², so the solve yields (I + A²)⁻¹ A = A (I + A²)⁻¹.
    let m = a.as_mat();
    let mut x = chol.solve(m);
    // The plain solve is accurate to ε‖A‖² only. Forming the residual as
    // A - X - A(AX) keeps its rounding at ε‖A‖ because ‖AX‖ <= 1.
    for _ in 0..REFINEMENT_STEPS {
        let residual = &(m - &x) - &m.matmul(&m.matmul(&x));
        x = &x + &chol.solve(&residual);
    }
    let (b, _) = HermitianMatrix::symmetrize(&x)?;
    debug_assert_eq!(b.dim(), d);
    Ok(b)
}

/// `(I + A²)⁻¹`.
pub fn resolvent_square<T: Scalar>(a: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let chol = Cholesky::factor(&a.square().shifted(1.0))?;
    let (r, _) = HermitianMatrix::symmetrize(&chol.solve(&Mat::identity(a.dim())))?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitDecomposition<T: Scalar> {
    pub beta: f64,
    pub b: HermitianMatrix<T>,
    /// Projector onto `H₋`.
    pub e: Projector<T>,
    pub basis_minus: OrthoBasis<T>,
    pub basis_plus: OrthoBasis<T>,
    /// `V₋* A V₋`.
    pub a_minus: HermitianMatrix<T>,
    /// `V₊* A V₊`.
    pub a_plus: HermitianMatrix<T>,
}

pub fn split<T: Scalar>(a: &HermitianMatrix<T>) -> Result<SplitDecomposition<T>> {
    split_with(a, DEFAULT_BETA)
}

/// Splitting with an explicit `β`; any `β >= 1 + ‖B‖` is valid.
pub fn split_with<T: Scalar>(a: &HermitianMatrix<T>, beta: f64) -> Result<SplitDecomposition<T>> {
    if !(beta >= DEFAULT_BETA) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "β must be a finite value >= {DEFAULT_BETA}, got {beta}"
        )));
    }
    let b = bounded_transform(a)?;
    let shifted = b.shifted(beta);
    let f = SubspaceBuilder::new(&shifted)?.at(beta)?;
    let a_minus = a.compress(f.basis.as_mat());
    let a_plus = a.compress(f.complement.as_mat());
    Ok(SplitDecomposition {
        beta,
        b,
        e: f.projector,
        basis_minus: f.basis,
        basis_plus: f.complement,
        a_minus,
        a_plus,
    })
}

/// Residual norms of every structural property of a splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitResiduals {
    /// `‖EB - BE‖_F`.
    pub transform_commutation: f64,
    /// `‖E (I + A²)⁻¹ - (I + A²)⁻¹ E‖_F`.
    pub resolvent_commutation: f64,
    /// `‖EA - AE‖_F`.
    pub reducing: f64,
    /// Largest gap between the sorted spectra of `A₋ ⊕ A₊` and of `A`.
    pub spectra: f64,
    /// `‖V₋ A₋ V₋* + V₊ A₊ V₊* - A‖_F`.
    pub reconstruction: f64,
    /// Largest eigenvalue of `A₋` (or `-inf` when `H₋ = {0}`).
    pub max_minus: f64,
    /// Smallest eigenvalue of `A₊` (or `+inf` when `H₊ = {0}`).
    pub min_plus: f64,
    /// `‖B‖` as a spectral norm.
    pub transform_norm: f64,
    /// `‖A‖_F`.
    pub scale: f64,
}

impl SplitResiduals {
    pub fn holds(&self, tol_scale: f64) -> bool {
        let s = self.scale;
        self.transform_commutation <= COMMUTATION_TOL * tol_scale
            && self.resolvent_commutation <= COMMUTATION_TOL * tol_scale
            && self.reducing <= REDUCING_TOL * s * tol_scale
            && self.spectra <= SPECTRA_TOL * tol_scale
            && self.reconstruction <= RECONSTRUCTION_TOL * s * tol_scale
            && self.max_minus <= SIGN_TOL * s * tol_scale
            && self.min_plus >= -SIGN_TOL * s * tol_scale
            && self.transform_norm <= 0.5 + TRANSFORM_NORM_SLACK * tol_scale
    }
}

fn commutator_norm<T: Scalar>(p: &Mat<T>, m: &Mat<T>) -> f64 {
    p.matmul(m).distance(&m.matmul(p))
}

impl<T: Scalar> SplitDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    pub fn rank_minus(&self) -> usize {
        self.basis_minus.rank()
    }

    pub fn rank_plus(&self) -> usize {
        self.basis_plus.rank()
    }

    /// `V₋ A₋ V₋* + V₊ A₊ V₊*`.
    pub fn reassemble(&self) -> Mat<T> {
        let lift = |v: &OrthoBasis<T>, m: &HermitianMatrix<T>| {
            v.as_mat().matmul(&m.as_mat().matmul(&v.as_mat().adjoint()))
        };
        &lift(&self.basis_minus, &self.a_minus) + &lift(&self.basis_plus, &self.a_plus)
    }

    pub fn residuals(&self, a: &HermitianMatrix<T>) -> Result<SplitResiduals> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: a.dim(),
            });
        }
        let e = self.e.as_mat();
        let minus = eigen_oracle(&self.a_minus)?.eigenvalues;
        let plus = eigen_oracle(&self.a_plus)?.eigenvalues;
        let mut joint: Vec<f64> = minus.iter().chain(&plus).copied().collect();
        joint.sort_by(f64::total_cmp);
        let reference = eigen_oracle(a)?.eigenvalues;
        let spectra = joint
            .iter()
            .zip(&reference)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let transform = eigen_oracle(&self.b)?;
        Ok(SplitResiduals {
            transform_commutation: commutator_norm(e, self.b.as_mat()),
            resolvent_commutation: commutator_norm(e, resolvent_square(a)?.as_mat()),
            reducing: commutator_norm(e, a.as_mat()),
            spectra,
            reconstruction: self.reassemble().distance(a.as_mat()),
            max_minus: minus.last().copied().unwrap_or(f64::NEG_INFINITY),
            min_plus: plus.first().copied().unwrap_or(f64::INFINITY),
            transform_norm: transform.spectral_radius(),
            scale: a.frobenius_norm(),
        })
    }
}

/// `|⟨Ax,x⟩ - ⟨Bx,x⟩ - ⟨BAx,Ax⟩|`; vanishes because `B + AB A = A`.
pub fn check_form_identity<T: Scalar>(
    a: &HermitianMatrix<T>,
    x: &Vector<T>,
) -> Result<CheckOutcome> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: x.len(),
        });
    }
    let b = bounded_transform(a)?;
    let ax = a.apply(x);
    let residual = (a.quadratic_form(x) - b.quadratic_form(x) - b.quadratic_form(&ax)).abs();
    let norm = a.frobenius_norm();
    Ok(CheckOutcome::within(
        residual,
        FORM_IDENTITY_TOL * (1.0 + norm * norm) * x.norm_sqr(),
    ))
}

/// Random vectors of `H₋` have `⟨Bx,x⟩ <= 0` and `⟨Ax,x⟩ <= 0`; those of `H₊`
/// the reverse. The residual is the largest normalized violation.
pub fn check_sign_inequalities<T: Scalar, R: Rng + ?Sized>(
    a: &HermitianMatrix<T>,
    s: &SplitDecomposition<T>,
    trials: usize,
    rng: &mut R,
) -> Result<CheckOutcome> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            actual: a.dim(),
        });
    }
    let scale = a.frobenius_norm();
    let mut worst = f64::NEG_INFINITY;
    let mut passed = true;
    for (basis, sign) in [(&s.basis_minus, 1.0), (&s.basis_plus, -1.0)] {
        if basis.is_empty() {
            continue;
        }
        for _ in 0..trials {
            let x = random_in(basis, rng);
            let xx = x.norm_sqr();
            // sign * form <= tol means the form has the expected sign.
            let fb = sign * s.b.quadratic_form(&x) / xx;
            let fa = sign * a.quadratic_form(&x) / xx;
            passed &= fb <= TRANSFORM_SIGN_TOL && fa <= SIGN_TOL * scale;
            worst = worst.max(fb / TRANSFORM_SIGN_TOL).max(if scale > 0.0 {
                fa / (SIGN_TOL * scale)
            } else {
                fa
            });
        }
    }
    Ok(CheckOutcome {
        passed,
        residual: worst.max(0.0),
        tolerance: 1.0,
        strict: false,
    })
}
