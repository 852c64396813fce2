//! Resolutions of the identity `(E(λ))_{λ ∈ R}` in finite dimension.
//!
//! A finite-dimensional spectral family is piecewise constant, so it is stored
//! exactly as a jump list `(λ_j, ΔE_j)` and evaluated with the rule
//! `E(λ) = Σ_{λ_j <= λ} ΔE_j`, which makes it right-continuous by construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_oracle, HermitianMatrix, Mat, OrthoBasis, Projector, Scalar, Vector};
use crate::splitting::split;
use crate::subspace::{CheckOutcome, SubspaceBuilder};

/// Eigenvalues closer than this, relative to the spectral radius, share a jump.
pub const CLUSTER_REL_TOL: f64 = 1e-9;
/// `A >= 0` is accepted down to `-1e-10 ||A||_F`; smaller eigenvalues are clamped to 0.
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const DENSITY_TOL: f64 = 1e-9;
/// Relative tolerance for the terminal value of a domain profile.
pub const PROFILE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Jump<T: Scalar> {
    pub lambda: f64,
    pub increment: Projector<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily<T: Scalar> {
    dim: usize,
    jumps: Vec<Jump<T>>,
}

/// How the family of an indefinite operator is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Family of `A + c` for `c = ||A||_F + 1`, shifted back by `-c`.
    Shift,
    /// Families of `A₊` and `-A₋` from the positive/negative splitting, merged.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyDiagnostics {
    /// `max_{i != j} ||ΔE_i ΔE_j||_F`.
    pub orthogonality: f64,
    /// `||Σ ΔE_j - I||_F`.
    pub completeness: f64,
    /// `max_j ||ΔE_j² - ΔE_j||_F`.
    pub idempotence: f64,
    /// Jump points strictly increasing and `E(λ_{j-1}) <= E(λ_j)` in projector order.
    pub monotone: bool,
}

impl FamilyDiagnostics {
    pub fn holds(&self) -> bool {
        self.orthogonality <= ORTHOGONALITY_TOL
            && self.completeness <= COMPLETENESS_TOL
            && self.monotone
    }
}

impl<T: Scalar> SpectralFamily<T> {
    /// Sorts the jumps; panics on a dimension mismatch.
    pub fn from_jumps(dim: usize, mut jumps: Vec<Jump<T>>) -> Self {
        assert!(jumps.iter().all(|j| j.increment.dim() == dim));
        jumps.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        Self { dim, jumps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jumps(&self) -> &[Jump<T>] {
        &self.jumps
    }

    pub fn jump_points(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.lambda).collect()
    }

    pub fn increment_ranks(&self) -> Vec<usize> {
        self.jumps.iter().map(|j| j.increment.rank()).collect()
    }

    /// `E(λ) = Σ_{λ_j <= λ} ΔE_j`.
    pub fn evaluate(&self, lambda: f64) -> Projector<T> {
        self.jumps
            .iter()
            .take_while(|j| j.lambda <= lambda)
            .fold(Projector::zero(self.dim), |acc, j| acc.sum(&j.increment))
    }

    /// `E(λ) x` without forming `E(λ)`.
    pub fn apply(&self, lambda: f64, x: &Vector<T>) -> Vector<T> {
        let mut out = Vector::zeros(self.dim);
        for j in self.jumps.iter().take_while(|j| j.lambda <= lambda) {
            out.axpy(T::one(), &j.increment.apply(x));
        }
        out
    }

    /// Points at which two families must agree: every jump of either family
    /// and every midpoint between consecutive jumps, plus one point outside
    /// on each side. Jumps closer than the clustering tolerance count once.
    pub fn evaluation_points(&self, other: Option<&Self>) -> Vec<f64> {
        let mut pts: Vec<f64> = self.jump_points();
        if let Some(o) = other {
            pts.extend(o.jump_points());
        }
        pts.sort_by(f64::total_cmp);
        // Jumps of two families that agree up to the clustering tolerance are
        // one point; keep the largest so that both families have jumped there.
        let width = CLUSTER_REL_TOL * pts.iter().fold(0.0, |m: f64, p| m.max(p.abs()));
        let mut merged: Vec<f64> = Vec::with_capacity(pts.len());
        for p in pts {
            match merged.last_mut() {
                Some(last) if p - *last <= width => *last = p,
                _ => merged.push(p),
            }
        }
        let pts = merged;
        let mut out = Vec::with_capacity(2 * pts.len() + 2);
        match (pts.first(), pts.last()) {
            (Some(&lo), Some(&hi)) => {
                out.push(lo - 1.0 - lo.abs());
                for w in pts.windows(2) {
                    out.push(w[0]);
                    out.push(0.5 * (w[0] + w[1]));
                }
                out.push(hi);
                out.push(hi + 1.0 + hi.abs());
            }
            _ => out.push(0.0),
        }
        out
    }

    pub fn diagnostics(&self) -> FamilyDiagnostics {
        let mut orthogonality: f64 = 0.0;
        let mut idempotence: f64 = 0.0;
        for (i, a) in self.jumps.iter().enumerate() {
            idempotence = idempotence.max(a.increment.idempotence_defect());
            for b in &self.jumps[i + 1..] {
                let prod = a.increment.as_mat().matmul(b.increment.as_mat());
                orthogonality = orthogonality.max(prod.frobenius_norm());
            }
        }
        let total = self
            .jumps
            .iter()
            .fold(Projector::zero(self.dim), |acc, j| acc.sum(&j.increment));
        let completeness = total.distance(&Projector::identity(self.dim));

        let mut monotone = self.jumps.windows(2).all(|w| w[0].lambda < w[1].lambda);
        let mut running = Projector::zero(self.dim);
        for j in &self.jumps {
            let next = running.sum(&j.increment);
            monotone &= next.order_defect(&running) <= COMPLETENESS_TOL;
            running = next;
        }
        FamilyDiagnostics {
            orthogonality,
            completeness,
            idempotence,
            monotone,
        }
    }

    /// Largest `||E(λ) - F(λ)||_F` over [`evaluation_points`](Self::evaluation_points) of both.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.evaluation_points(Some(other))
            .into_iter()
            .map(|l| self.evaluate(l).distance(&other.evaluate(l)))
            .fold(0.0, f64::max)
    }

    /// `max_λ ||E(λ) A - A E(λ)||_F` over jumps and midpoints.
    pub fn commutation_defect(&self, a: &HermitianMatrix<T>) -> f64 {
        self.evaluation_points(None)
            .into_iter()
            .map(|l| {
                let e = self.evaluate(l);
                let ea = e.as_mat().matmul(a.as_mat());
                let ae = a.as_mat().matmul(e.as_mat());
                ea.distance(&ae)
            })
            .fold(0.0, f64::max)
    }
}

/// Groups ascending eigenvalues into jump clusters; returns index ranges.
fn clusters(eigenvalues: &[f64], scale: f64) -> Vec<std::ops::Range<usize>> {
    let width = CLUSTER_REL_TOL * scale;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=eigenvalues.len() {
        if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] > width {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// `E(λ) = P_{F(A, λ)}` for `A >= 0`.
///
/// The jump points are the clustered eigenvalues; each increment is the
/// difference of consecutive geometric-subspace projectors.
pub fn build_positive<T: Scalar>(a: &HermitianMatrix<T>) -> Result<SpectralFamily<T>> {
    let d = a.dim();
    if d == 0 {
        return Ok(SpectralFamily::from_jumps(0, Vec::new()));
    }
    let builder = SubspaceBuilder::new(a)?;
    let eig = builder.eigen();
    let tolerance = POSITIVITY_TOL * a.frobenius_norm();
    if eig.min_eigenvalue() < -tolerance {
        return Err(Error::NotPositive {
            eigenvalue: eig.min_eigenvalue(),
            tolerance,
        });
    }
    let clamped: Vec<f64> = eig.eigenvalues.iter().map(|&m| m.max(0.0)).collect();
    let scale = eig.spectral_radius().max(f64::MIN_POSITIVE);

    let mut jumps = Vec::new();
    let mut previous = Projector::zero(d);
    for range in clusters(&clamped, scale) {
        let members = &clamped[range.clone()];
        let point = members.iter().sum::<f64>() / members.len() as f64;
        let level = eig.eigenvalues[range]
            .iter()
            .map(|m| m.abs())
            .fold(0.0, f64::max);
        let current = builder.at(level)?.projector;
        jumps.push(Jump {
            lambda: point,
            increment: current.difference(&previous),
        });
        previous = current;
    }
    Ok(SpectralFamily::from_jumps(d, jumps))
}

/// `F(λ) = E(λ - c)`, the family of `A + c`.
pub fn shift_family<T: Scalar>(family: &SpectralFamily<T>, c: f64) -> SpectralFamily<T> {
    SpectralFamily {
        dim: family.dim,
        jumps: family
            .jumps
            .iter()
            .map(|j| Jump {
                lambda: j.lambda + c,
                increment: j.increment.clone(),
            })
            .collect(),
    }
}

/// Right-continuous version of `G(λ) = I - E(-λ)`, the family of `-A`.
pub fn negate_family<T: Scalar>(family: &SpectralFamily<T>) -> SpectralFamily<T> {
    SpectralFamily {
        dim: family.dim,
        jumps: family
            .jumps
            .iter()
            .rev()
            .map(|j| Jump {
                lambda: -j.lambda,
                increment: j.increment.clone(),
            })
            .collect(),
    }
}

/// `E(λ) = E₋(λ) ⊕ E₊(λ)`, lifting each summand through its embedding `V`
/// as `V ΔE V*`.
pub fn merge_families<T: Scalar>(
    minus: &SpectralFamily<T>,
    plus: &SpectralFamily<T>,
    embed_minus: &OrthoBasis<T>,
    embed_plus: &OrthoBasis<T>,
) -> Result<SpectralFamily<T>> {
    let d = embed_minus.dim();
    if embed_plus.dim() != d {
        return Err(Error::BadEmbedding(format!(
            "ambient dimensions differ: {} vs {}",
            d,
            embed_plus.dim()
        )));
    }
    if embed_minus.rank() != minus.dim() || embed_plus.rank() != plus.dim() {
        return Err(Error::BadEmbedding(format!(
            "embedding ranks ({}, {}) do not match family dimensions ({}, {})",
            embed_minus.rank(),
            embed_plus.rank(),
            minus.dim(),
            plus.dim()
        )));
    }
    if embed_minus.rank() + embed_plus.rank() != d {
        return Err(Error::BadEmbedding(format!(
            "ranks {} + {} do not span dimension {d}",
            embed_minus.rank(),
            embed_plus.rank()
        )));
    }
    let joint = OrthoBasis::from_columns_unchecked(embed_minus.concat(embed_plus));
    let defect = joint.orthonormality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::BadEmbedding(format!(
            "joint basis deviates from orthonormal by {defect:e}"
        )));
    }

    let lift = |family: &SpectralFamily<T>, v: &OrthoBasis<T>| -> Vec<Jump<T>> {
        let v = v.as_mat();
        let vt = v.adjoint();
        family
            .jumps
            .iter()
            .map(|j| {
                let big = v.matmul(&j.increment.as_mat().matmul(&vt));
                Jump {
                    lambda: j.lambda,
                    increment: Projector::from_hermitian_unchecked(
                        HermitianMatrix::new(big).expect("square lift"),
                    ),
                }
            })
            .collect()
    };
    let mut all = lift(minus, embed_minus);
    all.extend(lift(plus, embed_plus));
    all.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));

    let mut merged: Vec<Jump<T>> = Vec::with_capacity(all.len());
    for j in all {
        match merged.last_mut() {
            Some(last) if last.lambda == j.lambda => {
                last.increment = last.increment.sum(&j.increment);
            }
            _ => merged.push(j),
        }
    }
    Ok(SpectralFamily {
        dim: d,
        jumps: merged,
    })
}

/// A compressed piece inherits rounding noise of the order of the parent's
/// norm, not its own; eigenvalues below `floor` are set to zero exactly.
fn denoised<T: Scalar>(piece: &HermitianMatrix<T>, floor: f64) -> Result<HermitianMatrix<T>> {
    if piece.dim() == 0 {
        return Ok(piece.clone());
    }
    let eig = eigen_oracle(piece)?;
    Ok(eig.reconstruct_with(|m| if m.abs() <= floor { 0.0 } else { m }))
}

/// Family of an arbitrary self-adjoint `A`.
pub fn build_general<T: Scalar>(a: &HermitianMatrix<T>, route: Route) -> Result<SpectralFamily<T>> {
    match route {
        Route::Shift => {
            let c = a.frobenius_norm() + 1.0;
            let positive = build_positive(&a.shifted(c))?;
            Ok(shift_family(&positive, -c))
        }
        Route::Split => {
            let parts = split(a)?;
            let floor = CLUSTER_REL_TOL * a.frobenius_norm();
            let plus = build_positive(&denoised(&parts.a_plus, floor)?)?;
            let minus = negate_family(&build_positive(&denoised(
                &parts.a_minus.negated(),
                floor,
            )?)?);
            merge_families(&minus, &plus, &parts.basis_minus, &parts.basis_plus)
        }
    }
}

/// `‖A E(n_k) x‖` along increasing cut points `n_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainProfile {
    pub cut_points: Vec<f64>,
    pub norms: Vec<f64>,
    /// `‖Ax‖`.
    pub full_norm: f64,
    pub monotone: bool,
    /// The last cut covers the whole spectrum and its norm equals `‖Ax‖`.
    pub saturated: bool,
}

impl DomainProfile {
    /// First cut whose norm reaches `(1 - rel) ‖Ax‖`.
    pub fn saturation_index(&self, rel: f64) -> Option<usize> {
        let target = (1.0 - rel) * self.full_norm;
        self.norms.iter().position(|&n| n >= target)
    }
}

pub fn domain_profile<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    cuts: &[f64],
) -> Result<DomainProfile> {
    if x.len() != a.dim() || family.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: if x.len() != a.dim() {
                x.len()
            } else {
                family.dim()
            },
        });
    }
    if cuts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "cut points must be strictly increasing".into(),
        ));
    }
    let full_norm = a.apply(x).norm();
    let norms: Vec<f64> = cuts
        .iter()
        .map(|&n| a.apply(&family.apply(n, x)).norm())
        .collect();
    let slack = 1e-12 * (full_norm + a.frobenius_norm() * x.norm());
    let monotone = norms.windows(2).all(|w| w[1] >= w[0] - slack);
    let covers = match (cuts.last(), family.jumps().last()) {
        (Some(&c), Some(j)) => c >= j.lambda,
        (Some(_), None) => true,
        _ => false,
    };
    let saturated = covers
        && norms
            .last()
            .is_some_and(|&n| (n - full_norm).abs() <= PROFILE_TOL * full_norm.max(slack));
    Ok(DomainProfile {
        cut_points: cuts.to_vec(),
        norms,
        full_norm,
        monotone,
        saturated,
    })
}

/// `F(A, ε*) = H` at `ε* = ρ(A) (1 + 1e-9)`: every vector lies in some `F(A, ε)`.
pub fn density_check<T: Scalar>(a: &HermitianMatrix<T>) -> Result<CheckOutcome> {
    let builder = SubspaceBuilder::new(a)?;
    let level = builder.eigen().spectral_radius() * (1.0 + 1e-9);
    let p = builder.at(level)?.projector;
    Ok(CheckOutcome::within(
        p.as_mat().distance(&Mat::identity(a.dim())),
        DENSITY_TOL,
    ))
}
