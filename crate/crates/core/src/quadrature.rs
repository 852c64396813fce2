//! Riemann–Stieltjes sums over the grid `λ_i = i / k` and exact integrals
//! against the jump measure of a spectral family.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{SpectralFamily, POSITIVITY_TOL};
use crate::linalg::{HermitianMatrix, Mat, Scalar, Vector};
use crate::subspace::CheckOutcome;

/// `x ∈ F(A, n)` iff `‖E(n)x - x‖ <= CAP_TOL ‖x‖`.
pub const CAP_TOL: f64 = 1e-9;
/// Absolute slack on the global error bounds.
pub const BOUND_SLACK: f64 = 1e-9;
/// Relative slack on the per-cell inequalities.
pub const CELL_SLACK: f64 = 1e-10;
/// Relative tolerance of the partition identities and the exact integrals.
pub const PARTITION_TOL: f64 = 1e-10;
pub const INTEGRAL_TOL: f64 = 1e-9;
/// Relative to `‖A‖_F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Cells with `‖x_i‖² <= NEGLIGIBLE_CELL ‖x‖²` are skipped by the per-cell checks.
pub const NEGLIGIBLE_CELL: f64 = 1e-12;

/// One nonzero increment `x_i = E(λ_i)x - E(λ_{i-1})x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell<T: Scalar> {
    pub index: usize,
    pub lambda: f64,
    /// `λ_{i-1}`; zero for the first cell, which collects the kernel.
    pub lambda_prev: f64,
    pub vector: Vector<T>,
}

/// Sums `Σ λ_i ‖x_i‖²` and `Σ λ_i² ‖x_i‖²` with their errors. Only cells
/// that contain a jump are stored; all others are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSum<T: Scalar> {
    pub n: u64,
    pub k: u64,
    pub cells: Vec<Cell<T>>,
    pub norm_sqr: f64,
    /// `⟨Ax, x⟩`.
    pub form1: f64,
    /// `⟨A²x, x⟩ = ‖Ax‖²`.
    pub form2: f64,
    pub sum1: f64,
    pub sum2: f64,
    pub err1: f64,
    pub err2: f64,
    /// `‖x‖² / k`.
    pub bound1: f64,
    /// `2n ‖x‖² / k`.
    pub bound2: f64,
}

impl<T: Scalar> PartitionSum<T> {
    pub fn lambda_points(&self) -> Vec<f64> {
        (0..=self.n * self.k).map(|i| grid(i, self.k)).collect()
    }

    pub fn within_bounds(&self) -> bool {
        self.err1 <= self.bound1 + BOUND_SLACK && self.err2 <= self.bound2 + BOUND_SLACK
    }

    /// `|Σ ‖x_i‖² - ‖x‖²| / ‖x‖²`.
    pub fn pythagoras_defect(&self) -> f64 {
        let total: f64 = self.cells.iter().map(|c| c.vector.norm_sqr()).sum();
        relative(total - self.norm_sqr, self.norm_sqr)
    }

    /// `‖Σ x_i - x‖ / ‖x‖`.
    pub fn sum_defect(&self, x: &Vector<T>) -> f64 {
        let mut total = Vector::zeros(x.len());
        for c in &self.cells {
            total.axpy(T::one(), &c.vector);
        }
        relative((&total - x).norm(), x.norm())
    }

    /// `max_{i != j} |⟨x_i, x_j⟩| / ‖x‖²`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                worst = worst.max(a.vector.dot_unchecked(&b.vector).abs());
            }
        }
        relative(worst, self.norm_sqr)
    }

    pub fn invariants_hold(&self, x: &Vector<T>) -> bool {
        self.pythagoras_defect() <= PARTITION_TOL
            && self.sum_defect(x) <= PARTITION_TOL
            && self.orthogonality_defect() <= PARTITION_TOL
            && self.within_bounds()
    }
}

fn relative(value: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        value.abs() / scale
    } else {
        value.abs()
    }
}

fn grid(i: u64, k: u64) -> f64 {
    i as f64 / k as f64
}

/// Smallest `i` with `i / k >= λ`.
fn cell_index(lambda: f64, k: u64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let mut i = (lambda * k as f64).ceil() as u64;
    while i > 0 && grid(i - 1, k) >= lambda {
        i -= 1;
    }
    while grid(i, k) < lambda {
        i += 1;
    }
    i
}

/// Smallest integer `n >= 1` with `E(n)x = x`: the ceiling of the largest
/// jump point that carries mass of `x`.
pub fn smallest_cap<T: Scalar>(family: &SpectralFamily<T>, x: &Vector<T>) -> u64 {
    let floor = CAP_TOL * x.norm();
    let top = family
        .jumps()
        .iter()
        .filter(|j| j.increment.apply(x).norm() > floor)
        .map(|j| j.lambda)
        .fold(0.0, f64::max);
    (top.ceil() as u64).max(1)
}

fn check_inputs<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    n: u64,
    k: u64,
) -> Result<()> {
    for actual in [family.dim(), x.len()] {
        if actual != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                actual,
            });
        }
    }
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "n and k must be positive, got n = {n}, k = {k}"
        )));
    }
    let tolerance = POSITIVITY_TOL * a.frobenius_norm();
    if let Some(first) = family.jumps().first() {
        if first.lambda < -tolerance {
            return Err(Error::NotPositive {
                eigenvalue: first.lambda,
                tolerance,
            });
        }
    }
    let defect = (&family.apply(n as f64, x) - x).norm();
    if defect > CAP_TOL * x.norm() {
        return Err(Error::OutsideCap {
            n,
            defect,
            suggested: smallest_cap(family, x),
        });
    }
    Ok(())
}

/// Riemann–Stieltjes sums of `⟨Ax,x⟩` and `⟨A²x,x⟩` on the grid `i / k`,
/// `0 <= i <= nk`, for `A >= 0` and `x ∈ F(A, n)`.
pub fn partition_sum<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    n: u64,
    k: u64,
) -> Result<PartitionSum<T>> {
    check_inputs(a, family, x, n, k)?;
    let top = n as f64;
    let mut indices: Vec<u64> = family
        .jumps()
        .iter()
        .filter(|j| j.lambda <= top)
        .map(|j| cell_index(j.lambda, k))
        .collect();
    indices.dedup();

    // E(λ)x as prefix sums of the per-jump pieces ΔE_j x.
    let pieces: Vec<Vector<T>> = family
        .jumps()
        .iter()
        .map(|j| j.increment.apply(x))
        .collect();
    let project = |lambda: f64| {
        let mut out = Vector::zeros(x.len());
        for (j, piece) in family.jumps().iter().zip(&pieces) {
            if j.lambda > lambda {
                break;
            }
            out.axpy(T::one(), piece);
        }
        out
    };
    let cells: Vec<Cell<T>> = indices
        .into_iter()
        .map(|i| {
            let lambda = grid(i, k);
            let (lambda_prev, vector) = if i == 0 {
                (0.0, project(lambda))
            } else {
                let prev = grid(i - 1, k);
                (prev, &project(lambda) - &project(prev))
            };
            Cell {
                index: i as usize,
                lambda,
                lambda_prev,
                vector,
            }
        })
        .collect();

    let norm_sqr = x.norm_sqr();
    let form1 = a.quadratic_form(x);
    let form2 = a.apply(x).norm_sqr();
    let sum1: f64 = cells.iter().map(|c| c.lambda * c.vector.norm_sqr()).sum();
    let sum2: f64 = cells
        .iter()
        .map(|c| c.lambda * c.lambda * c.vector.norm_sqr())
        .sum();
    Ok(PartitionSum {
        n,
        k,
        cells,
        norm_sqr,
        form1,
        form2,
        sum1,
        sum2,
        err1: (form1 - sum1).abs(),
        err2: (form2 - sum2).abs(),
        bound1: norm_sqr / k as f64,
        bound2: 2.0 * n as f64 * norm_sqr / k as f64,
    })
}

/// Worst normalized violation of each per-cell inequality family; a value
/// `<= 0` means the family holds with the stated slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellBounds {
    /// `λ_{i-1}‖x_i‖² <= ⟨Ax_i,x_i⟩ <= λ_i‖x_i‖²`.
    pub sandwich: f64,
    /// Same with `A²` and `λ²`.
    pub sandwich_sq: f64,
    /// `|⟨(A - λ_i)x_i, x_i⟩| <= ‖x_i‖² / k`.
    pub deviation: f64,
    /// `|⟨(A² - λ_i²)x_i, x_i⟩| <= 2n ‖x_i‖² / k`.
    pub deviation_sq: f64,
    pub cells: usize,
}

impl CellBounds {
    pub fn holds(&self) -> bool {
        self.sandwich <= 0.0
            && self.sandwich_sq <= 0.0
            && self.deviation <= 0.0
            && self.deviation_sq <= 0.0
    }

    pub fn outcome(&self) -> CheckOutcome {
        let worst = self
            .sandwich
            .max(self.sandwich_sq)
            .max(self.deviation)
            .max(self.deviation_sq);
        CheckOutcome::within(worst, 0.0)
    }
}

/// Checks the four per-cell inequality families on every nonzero `x_i`.
pub fn per_cell_bounds<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    n: u64,
    k: u64,
) -> Result<CellBounds> {
    let sum = partition_sum(a, family, x, n, k)?;
    // Cells below this mass are rounding residue whose direction is meaningless.
    let floor = NEGLIGIBLE_CELL * sum.norm_sqr;
    let (mut s1, mut s2, mut d1, mut d2) = (
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    let mut count = 0;
    for c in &sum.cells {
        let w = c.vector.norm_sqr();
        if w <= floor {
            continue;
        }
        count += 1;
        let (lo, hi) = (c.lambda_prev, c.lambda);
        let q1 = a.quadratic_form(&c.vector);
        let q2 = a.apply(&c.vector).norm_sqr();
        let slack1 = CELL_SLACK * hi.max(1.0) * w;
        let slack2 = CELL_SLACK * (hi * hi).max(1.0) * w;
        s1 = s1
            .max((lo * w - q1 - slack1) / w)
            .max((q1 - hi * w - slack1) / w);
        s2 = s2
            .max((lo * lo * w - q2 - slack2) / w)
            .max((q2 - hi * hi * w - slack2) / w);
        d1 = d1.max(((q1 - hi * w).abs() - w / k as f64 - slack1) / w);
        d2 = d2.max(((q2 - hi * hi * w).abs() - 2.0 * n as f64 * w / k as f64 - slack2) / w);
    }
    Ok(CellBounds {
        sandwich: s1,
        sandwich_sq: s2,
        deviation: d1,
        deviation_sq: d2,
        cells: count,
    })
}

/// One row of an error-decay table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub k: u64,
    pub err1: f64,
    pub bound1: f64,
    pub err2: f64,
    pub bound2: f64,
}

pub fn error_table<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    n: u64,
    ks: &[u64],
) -> Result<Vec<ErrorRow>> {
    ks.iter()
        .map(|&k| {
            let s = partition_sum(a, family, x, n, k)?;
            Ok(ErrorRow {
                k,
                err1: s.err1,
                bound1: s.bound1,
                err2: s.err2,
                bound2: s.bound2,
            })
        })
        .collect()
}

/// `k = 1, 2, 4, ..., <= k_max`.
pub fn dyadic_ks(k_max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |k| k.checked_mul(2))
        .take_while(|&k| k <= k_max.max(1))
        .collect()
}

/// `(Σ_j λ_j ⟨ΔE_j x, x⟩, Σ_j λ_j² ⟨ΔE_j x, x⟩)`.
pub fn integral_form<T: Scalar>(family: &SpectralFamily<T>, x: &Vector<T>) -> Result<(f64, f64)> {
    if x.len() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            actual: x.len(),
        });
    }
    let mut first = 0.0;
    let mut second = 0.0;
    for j in family.jumps() {
        let mass = j.increment.apply(x).dot_unchecked(x).re();
        first += j.lambda * mass;
        second += j.lambda * j.lambda * mass;
    }
    Ok((first, second))
}

/// Compares [`integral_form`] with `⟨Ax,x⟩` and `‖Ax‖²`, relative to
/// `‖A‖_F ‖x‖²` and `‖A‖_F² ‖x‖²`.
pub fn check_integral_form<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
) -> Result<CheckOutcome> {
    let (first, second) = integral_form(family, x)?;
    let norm = a.frobenius_norm();
    let xx = x.norm_sqr();
    let r1 = relative(first - a.quadratic_form(x), norm * xx);
    let r2 = relative(second - a.apply(x).norm_sqr(), norm * norm * xx);
    Ok(CheckOutcome::within(r1.max(r2), INTEGRAL_TOL))
}

/// `Σ_j λ_j ⟨ΔE_j x, y⟩`, assembled from quadratic forms by polarization.
pub fn bilinear_form<T: Scalar>(
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    y: &Vector<T>,
) -> Result<T> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let mut total = T::zero();
    for &u in T::polarization_units() {
        let mut z = x.clone();
        z.axpy(u, y);
        total += u.scale(integral_form(family, &z)?.0);
    }
    Ok(total.scale(0.25))
}

pub fn check_bilinear_form<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
    x: &Vector<T>,
    y: &Vector<T>,
) -> Result<CheckOutcome> {
    let value = bilinear_form(family, x, y)?;
    let exact = a.apply(x).dot_unchecked(y);
    let scale = a.frobenius_norm() * x.norm() * y.norm();
    Ok(CheckOutcome::within(
        relative((value - exact).abs(), scale),
        INTEGRAL_TOL,
    ))
}

/// `Σ_j λ_j ΔE_j`.
pub fn reconstruct_operator<T: Scalar>(family: &SpectralFamily<T>) -> HermitianMatrix<T> {
    let d = family.dim();
    let mut out = Mat::zeros(d, d);
    for j in family.jumps() {
        out = &out + &j.increment.as_mat().scaled_real(j.lambda);
    }
    HermitianMatrix::new(out).expect("square sum")
}

pub fn check_reconstruction<T: Scalar>(
    a: &HermitianMatrix<T>,
    family: &SpectralFamily<T>,
) -> CheckOutcome {
    let r = reconstruct_operator(family).as_mat().distance(a.as_mat());
    CheckOutcome::within(relative(r, a.frobenius_norm()), RECONSTRUCTION_TOL)
}
