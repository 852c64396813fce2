//! Geometric subspaces `F(A, λ) = { x : ||A^n x|| <= λ^n ||x|| for all n }`.
//!
//! Two independent procedures compute them. [`membership`] decides whether a
//! single vector belongs to `F(A, λ)` by power iteration on `A^2`, never
//! looking at the spectrum. [`SubspaceBuilder`] classifies the eigenvectors of
//! the Jacobi oracle by `|μ| <= λ` and then re-validates every selected vector
//! with [`membership`], so each constructed subspace carries its own
//! cross-check.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    eigen_oracle, orthonormalize, projector_from_basis, EigenDecomposition, HermitianMatrix, Mat,
    OrthoBasis, Projector, Scalar, Vector,
};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_M_MAX: usize = 200;
/// Relative widening of `λ` when classifying oracle eigenvalues.
pub const CLASSIFY_REL_TOL: f64 = 1e-10;
/// Vectors with `||Ax|| <= KERNEL_TOL * ||A||_F * ||x||` are numerically in the kernel.
pub const KERNEL_TOL: f64 = 1e-12;
/// Projector-order and projector-equality tolerance (Frobenius).
pub const INCLUSION_TOL: f64 = 1e-8;
/// Relative slack for the norm sandwich inequalities.
pub const SANDWICH_SLACK: f64 = 1e-10;

/// Iteration stops once rounding noise in the dominant direction could have
/// been amplified by this factor relative to the iterate.
const NOISE_GAIN_LIMIT: f64 = 1e10;
/// Repeated squarings used to bound the spectral radius.
const RADIUS_SQUARINGS: u32 = 12;
const STAGNATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Estimate of `lim ||A^m x||^{1/m}`.
    pub growth_rate_estimate: f64,
    pub iterations_used: usize,
    /// `λ - growth_rate_estimate`.
    pub margin: f64,
}

/// Shared per-matrix data for repeated membership queries.
#[derive(Debug, Clone)]
pub struct GrowthProbe<'a, T: Scalar> {
    a: &'a HermitianMatrix<T>,
    norm: f64,
    radius: f64,
}

impl<'a, T: Scalar> GrowthProbe<'a, T> {
    pub fn new(a: &'a HermitianMatrix<T>) -> Self {
        let norm = a.frobenius_norm();
        Self {
            a,
            norm,
            radius: spectral_radius_bound(a, norm),
        }
    }

    /// Upper bound on the spectral radius, tight to a factor `d^(1/8192)`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn verdict(
        &self,
        lambda: f64,
        x: &Vector<T>,
        rel_tol: f64,
        m_max: usize,
    ) -> Result<MembershipVerdict> {
        if !(lambda >= 0.0) || !(rel_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "membership needs λ >= 0 and rel_tol >= 0, got λ = {lambda}, rel_tol = {rel_tol}"
            )));
        }
        if x.len() != self.a.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.a.dim(),
                actual: x.len(),
            });
        }
        let x_norm = x.norm();
        if x_norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let floor = KERNEL_TOL * self.norm;

        // Below the resolution floor the growth rate is rounding noise, so
        // `λ` this small is decided like `λ = 0`.
        if lambda * (1.0 + rel_tol) <= floor {
            let rate = self.a.apply(x).norm() / x_norm;
            return Ok(MembershipVerdict {
                member: rate <= floor,
                growth_rate_estimate: rate,
                iterations_used: 1,
                margin: -rate,
            });
        }

        let cap = (lambda * (1.0 + rel_tol)).max(floor);
        let ln_cap = cap.ln();
        let ln_radius = self.radius.ln();
        let ln_noise_limit = NOISE_GAIN_LIMIT.ln();

        let mut y = x.scaled_real(1.0 / x_norm);
        // ln(||A^m x|| / ||x||)
        let mut log_growth = 0.0;
        let mut power = 0usize;
        let mut raw_ok = true;
        let mut estimate = 0.0;
        let mut previous: Option<f64> = None;
        let mut iterations = 0;

        for step in 1..=m_max.max(1) {
            iterations = step;
            let z = self.a.apply(&y);
            let rate = z.norm();
            estimate = rate;
            if rate == 0.0 {
                break;
            }
            let base = log_growth;
            log_growth = base + rate.ln();
            power += 1;
            raw_ok &= log_growth <= power as f64 * ln_cap + raw_slack(power);

            let w = self.a.apply(&z);
            let w_norm = w.norm();
            if w_norm == 0.0 {
                break;
            }
            log_growth = base + w_norm.ln();
            power += 1;
            raw_ok &= log_growth <= power as f64 * ln_cap + raw_slack(power);
            y = w.scaled_real(1.0 / w_norm);

            // The ratio sequence is nondecreasing, so exceeding the cap is final.
            if rate > cap || !raw_ok {
                break;
            }
            if let Some(prev) = previous {
                if (rate - prev).abs() <= STAGNATION_TOL * rate {
                    break;
                }
            }
            // Stop before the next double step could amplify rounding noise
            // in the dominant direction past the limit.
            let next_power = (power + 2) as f64;
            if next_power * ln_radius - (log_growth + 2.0 * rate.ln()) >= ln_noise_limit {
                break;
            }
            previous = Some(rate);
        }

        Ok(MembershipVerdict {
            member: estimate <= cap && raw_ok,
            growth_rate_estimate: estimate,
            iterations_used: iterations,
            margin: lambda - estimate,
        })
    }
}

fn raw_slack(power: usize) -> f64 {
    1e-12 + 1e-13 * power as f64
}

fn spectral_radius_bound<T: Scalar>(a: &HermitianMatrix<T>, norm: f64) -> f64 {
    if norm == 0.0 {
        return 0.0;
    }
    let mut m: Mat<T> = a.as_mat().scaled_real(1.0 / norm);
    let mut log_norm = norm.ln();
    for _ in 0..RADIUS_SQUARINGS {
        m = m.matmul(&m);
        let s = m.frobenius_norm();
        if s == 0.0 {
            return 0.0;
        }
        log_norm = 2.0 * log_norm + s.ln();
        m = m.scaled_real(1.0 / s);
    }
    (log_norm / 2f64.powi(RADIUS_SQUARINGS as i32)).exp()
}

/// Decides `x ∈ F(A, λ)` by normalized power iteration on `A^2`.
///
/// `λ = 0`, and any `λ` below `1e-12 ||A||_F`, is a kernel test
/// `||Ax|| <= 1e-12 ||A||_F ||x||`. Otherwise the iterate's growth ratio
/// `||A y|| / ||y||` is tracked until it exceeds `λ (1 + rel_tol)`,
/// stagnates, reaches `m_max` steps, or rounding noise in the dominant
/// direction could start to masquerade as signal.
pub fn membership<T: Scalar>(
    a: &HermitianMatrix<T>,
    lambda: f64,
    x: &Vector<T>,
    rel_tol: f64,
    m_max: usize,
) -> Result<MembershipVerdict> {
    GrowthProbe::new(a).verdict(lambda, x, rel_tol, m_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSubspace<T: Scalar> {
    pub lambda: f64,
    pub basis: OrthoBasis<T>,
    pub projector: Projector<T>,
    /// Orthonormal basis of `F(A, λ)^⊥`.
    pub complement: OrthoBasis<T>,
}

impl<T: Scalar> GeometricSubspace<T> {
    /// `||(I - P) C P||_F` for an operator `C`; zero when `C` maps the
    /// subspace into itself.
    pub fn invariance_defect(&self, c: &Mat<T>) -> f64 {
        let p = self.projector.as_mat();
        let q = self.projector.complement();
        q.as_mat().matmul(&c.matmul(p)).frobenius_norm()
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
}

/// Builds `F(A, λ)` for many `λ` from one oracle decomposition.
#[derive(Debug, Clone)]
pub struct SubspaceBuilder<'a, T: Scalar> {
    a: &'a HermitianMatrix<T>,
    eigen: EigenDecomposition<T>,
    probe: GrowthProbe<'a, T>,
}

impl<'a, T: Scalar> SubspaceBuilder<'a, T> {
    pub fn new(a: &'a HermitianMatrix<T>) -> Result<Self> {
        Ok(Self {
            a,
            eigen: eigen_oracle(a)?,
            probe: GrowthProbe::new(a),
        })
    }

    pub fn eigen(&self) -> &EigenDecomposition<T> {
        &self.eigen
    }

    pub fn operator(&self) -> &HermitianMatrix<T> {
        self.a
    }

    pub fn probe(&self) -> &GrowthProbe<'a, T> {
        &self.probe
    }

    pub fn at(&self, lambda: f64) -> Result<GeometricSubspace<T>> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "F(A, λ) needs λ >= 0, got {lambda}"
            )));
        }
        let limit = lambda * (1.0 + CLASSIFY_REL_TOL);
        let basis = self.eigen.select(|mu| mu.abs() <= limit);
        let complement = self.eigen.select(|mu| mu.abs() > limit);
        for (j, v) in basis.vectors().iter().enumerate() {
            let verdict = self
                .probe
                .verdict(lambda, v, DEFAULT_REL_TOL, DEFAULT_M_MAX)?;
            if !verdict.member {
                let eigenvalue = self
                    .eigen
                    .eigenvalues
                    .iter()
                    .copied()
                    .filter(|mu| mu.abs() <= limit)
                    .nth(j)
                    .unwrap_or(f64::NAN);
                return Err(Error::CrossCheck {
                    eigenvalue,
                    lambda,
                    estimate: verdict.growth_rate_estimate,
                });
            }
        }
        let projector = projector_from_basis(&basis);
        Ok(GeometricSubspace {
            lambda,
            basis,
            projector,
            complement,
        })
    }

    /// `A >= 0` up to `1e-12 ||A||_F`.
    pub fn is_nonnegative(&self) -> bool {
        self.eigen.min_eigenvalue() >= -KERNEL_TOL * self.a.frobenius_norm()
    }
}

/// `F(A, λ)` with its projector.
pub fn subspace<T: Scalar>(a: &HermitianMatrix<T>, lambda: f64) -> Result<GeometricSubspace<T>> {
    SubspaceBuilder::new(a)?.at(lambda)
}

/// Result of one executable lemma check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    /// Strict checks pass only when `residual < 0`; the tolerance is ignored.
    pub strict: bool,
}

impl CheckOutcome {
    pub fn within(residual: f64, tolerance: f64) -> Self {
        Self {
            passed: residual <= tolerance,
            residual,
            tolerance,
            strict: false,
        }
    }

    pub fn strictly_negative(residual: f64) -> Self {
        Self {
            passed: residual < 0.0,
            residual,
            tolerance: 0.0,
            strict: true,
        }
    }

    /// Re-evaluates the outcome with every tolerance multiplied by `scale`.
    pub fn passes_with(&self, scale: f64) -> bool {
        if self.strict {
            self.residual < 0.0
        } else {
            self.residual <= self.tolerance * scale
        }
    }

    /// Conjunction, keeping the worst residual relative to its tolerance.
    pub fn and(self, other: Self) -> Self {
        let ratio = |o: &Self| {
            if o.strict || o.tolerance == 0.0 {
                o.residual
            } else {
                o.residual / o.tolerance
            }
        };
        let worst = if ratio(&other) > ratio(&self) {
            other
        } else {
            self
        };
        Self {
            passed: self.passed && other.passed,
            ..worst
        }
    }
}

/// `F(A + δ, ε) ⊂ F(A, δ + ε)` in projector order.
pub fn check_inclusion_shift<T: Scalar>(
    a: &HermitianMatrix<T>,
    delta: f64,
    eps: f64,
) -> Result<CheckOutcome> {
    nonnegative("δ", delta)?;
    nonnegative("ε", eps)?;
    let small = subspace(&a.shifted(delta), eps)?;
    let big = subspace(a, delta + eps)?;
    Ok(CheckOutcome::within(
        big.projector.order_defect(&small.projector),
        INCLUSION_TOL,
    ))
}

/// `F(A^2, ε^2) = F(A, ε)`.
pub fn check_square_identity<T: Scalar>(a: &HermitianMatrix<T>, eps: f64) -> Result<CheckOutcome> {
    nonnegative("ε", eps)?;
    let squared = subspace(&a.square(), eps * eps)?;
    let plain = subspace(a, eps)?;
    Ok(CheckOutcome::within(
        squared.projector.distance(&plain.projector),
        INCLUSION_TOL,
    ))
}

/// `F(A^{-1}, 1/ε)^⊥ ⊂ F(A, ε)` for `A >= 1`.
pub fn check_inverse_inclusion<T: Scalar>(
    a: &HermitianMatrix<T>,
    eps: f64,
) -> Result<CheckOutcome> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ε must be positive, got {eps}"
        )));
    }
    let builder = SubspaceBuilder::new(a)?;
    let lowest = builder.eigen().min_eigenvalue();
    if lowest < 1.0 - 1e-12 {
        return Err(Error::NotBoundedBelowByOne { eigenvalue: lowest });
    }
    let inverse = builder.eigen().reconstruct_with(|mu| 1.0 / mu);
    let outside = subspace(&inverse, 1.0 / eps)?.projector.complement();
    let target = builder.at(eps)?.projector;
    Ok(CheckOutcome::within(
        target.order_defect(&outside),
        INCLUSION_TOL,
    ))
}

/// `F(S, ε) ⊂ F(A^2, ε + 1) ⊂ F(A, sqrt(ε + 1))` with `S = A^2 + 1`.
pub fn check_s_chain<T: Scalar>(a: &HermitianMatrix<T>, eps: f64) -> Result<CheckOutcome> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ε must be positive, got {eps}"
        )));
    }
    let squared = a.square();
    let s = squared.shifted(1.0);
    let p_s = subspace(&s, eps)?.projector;
    let p_sq = subspace(&squared, eps + 1.0)?.projector;
    let p_a = subspace(a, (eps + 1.0).sqrt())?.projector;
    let first = CheckOutcome::within(p_sq.order_defect(&p_s), INCLUSION_TOL);
    let second = CheckOutcome::within(p_a.order_defect(&p_sq), INCLUSION_TOL);
    Ok(first.and(second))
}

/// `||Ax|| > λ ||x||` (and `<Ax, x> > λ <x, x>` when `A >= 0`) for random
/// nonzero `x ⊥ F(A, λ)`.
///
/// The residual is the largest normalized shortfall `λ - ||Ax|| / ||x||`
/// (resp. `λ - <Ax,x> / <x,x>`) over all trials; the check passes when it is
/// strictly negative.
pub fn check_strict_lower<T: Scalar, R: Rng + ?Sized>(
    a: &HermitianMatrix<T>,
    lambda: f64,
    trials: usize,
    rng: &mut R,
) -> Result<CheckOutcome> {
    nonnegative("λ", lambda)?;
    let builder = SubspaceBuilder::new(a)?;
    let sub = builder.at(lambda)?;
    if sub.complement.is_empty() {
        return Err(Error::TrivialSubspace("F(A, λ)^⊥ is {0}"));
    }
    let positive = builder.is_nonnegative();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let x = random_in(&sub.complement, rng);
        let ax = a.apply(&x);
        let xx = x.norm_sqr();
        worst = worst.max(lambda - ax.norm() / xx.sqrt());
        if positive {
            worst = worst.max(lambda - ax.dot_unchecked(&x).re() / xx);
        }
    }
    Ok(CheckOutcome::strictly_negative(worst))
}

/// `λ ||x|| <= ||Ax|| <= μ ||x||`, its squared form
/// `λ² <x,x> <= <A²x,x> <= μ² <x,x>`, and for `A >= 0` also
/// `λ <x,x> <= <Ax,x> <= μ <x,x>`, on random `x ∈ F(A, μ) ∩ F(A, λ)^⊥`.
///
/// When `λ == μ` the shell is empty; the degenerate sandwich then uses the
/// eigenspace `{|eigenvalue| = λ}`, on which every inequality is an equality.
pub fn check_sandwich<T: Scalar, R: Rng + ?Sized>(
    a: &HermitianMatrix<T>,
    lambda: f64,
    mu: f64,
    trials: usize,
    rng: &mut R,
) -> Result<CheckOutcome> {
    nonnegative("λ", lambda)?;
    if !(lambda <= mu) {
        return Err(Error::InvalidParameter(format!(
            "sandwich needs λ <= μ, got λ = {lambda}, μ = {mu}"
        )));
    }
    let builder = SubspaceBuilder::new(a)?;
    let norm = a.frobenius_norm();
    let shell = if lambda == mu {
        let width = CLASSIFY_REL_TOL * lambda.max(norm);
        builder
            .eigen()
            .select(|m| (m.abs() - lambda).abs() <= width)
    } else {
        let inner = builder.at(lambda)?.projector.complement();
        let outer = builder.at(mu)?;
        let pushed: Vec<Vector<T>> = outer
            .basis
            .vectors()
            .iter()
            .map(|v| inner.apply(v))
            .collect();
        orthonormalize(a.dim(), &pushed)
    };
    if shell.is_empty() {
        return Err(Error::TrivialSubspace("F(A, μ) ∩ F(A, λ)^⊥ is {0}"));
    }
    let positive = builder.is_nonnegative();
    let scale = mu.max(KERNEL_TOL * norm);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let x = random_in(&shell, rng);
        let xx = x.norm_sqr();
        let ax = a.apply(&x);
        let ratio = ax.norm() / xx.sqrt();
        let square_form = ax.norm_sqr() / xx;
        worst = worst
            .max((lambda - ratio) / scale)
            .max((ratio - mu) / scale)
            .max((lambda * lambda - square_form) / (scale * scale))
            .max((square_form - mu * mu) / (scale * scale));
        if positive {
            let form = ax.dot_unchecked(&x).re() / xx;
            worst = worst.max((lambda - form) / scale).max((form - mu) / scale);
        }
    }
    Ok(CheckOutcome::within(worst, SANDWICH_SLACK))
}

/// Random combination of the basis vectors.
pub fn random_in<T: Scalar, R: Rng + ?Sized>(basis: &OrthoBasis<T>, rng: &mut R) -> Vector<T> {
    loop {
        let c = Vector::random(basis.rank(), rng);
        if c.norm() > 0.0 {
            return basis.combine(&c);
        }
    }
}

fn nonnegative(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be non-negative, got {value}"
        )))
    }
}
