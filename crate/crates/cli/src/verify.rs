//! The verification battery. Every parameter is derived from the operator's
//! spectrum (gap midpoints, radius) so a run is a pure function of its input.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specfam::family::{
    build_general, build_positive, density_check, domain_profile, Route, SpectralFamily,
    COMPLETENESS_TOL, ORTHOGONALITY_TOL,
};
use specfam::linalg::{
    eigen_oracle, EigenDecomposition, HermitianMatrix, Projector, Scalar, Vector,
};
use specfam::quadrature::{
    check_bilinear_form, check_integral_form, check_reconstruction, dyadic_ks, partition_sum,
    per_cell_bounds, smallest_cap, ErrorRow, BOUND_SLACK, PARTITION_TOL,
};
use specfam::splitting::{check_form_identity, check_sign_inequalities, split, SplitDecomposition};
use specfam::subspace::{
    check_inclusion_shift, check_inverse_inclusion, check_s_chain, check_sandwich,
    check_square_identity, check_strict_lower, CheckOutcome, SubspaceBuilder, INCLUSION_TOL,
};
use specfam::Result as CoreResult;

use crate::report::{
    CheckRecord, Extremes, FamilySummary, ProfileSummary, QuadratureSummary, Report, RunConfig,
    SplitSummary,
};

/// Which part of the battery to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Analyze,
    Split,
    Reconstruct,
    Verify,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::Analyze => "analyze",
            Scope::Split => "split",
            Scope::Reconstruct => "reconstruct",
            Scope::Verify => "verify",
        }
    }

    fn subspaces(self) -> bool {
        self == Scope::Verify
    }

    fn family(self) -> bool {
        matches!(self, Scope::Analyze | Scope::Verify)
    }

    fn split(self) -> bool {
        matches!(self, Scope::Split | Scope::Verify)
    }

    fn quadrature(self) -> bool {
        matches!(self, Scope::Reconstruct | Scope::Verify)
    }
}

const MONOTONE: &str = "Theorem, E(λ) <= E(μ) for λ <= μ";
const PROFILE_LABEL: &str = "desk-scale emulation: profile of ‖A E(n) x‖ along the jump points; \
                             the unbounded-domain dichotomy has no finite-dimensional counterpart";

struct Battery<'r> {
    report: &'r mut Report,
    tol_scale: f64,
}

impl Battery<'_> {
    fn push(&mut self, name: &str, anchor: &str, outcome: CoreResult<CheckOutcome>) {
        let record = match outcome {
            Ok(o) => CheckRecord::from_outcome(name, anchor, o, self.tol_scale),
            Err(e) => CheckRecord::failed(name, anchor, e),
        };
        self.report.checks.push(record);
    }

    fn vacuous(&mut self, name: &str, anchor: &str, why: &str) {
        self.report
            .checks
            .push(CheckRecord::vacuous(name, anchor, why));
    }
}

fn relative(value: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        value / scale
    } else {
        value
    }
}

/// Sorted values with near-duplicates (relative 1e-9) removed.
fn distinct(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    let width = 1e-9 * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for x in v {
        if out.last().is_none_or(|last| x - last > width) {
            out.push(x);
        }
    }
    out
}

/// Midpoint of the widest gap between consecutive distinct values.
fn widest_gap_midpoint(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    distinct(values)
        .windows(2)
        .max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0])))
        .map(|w| 0.5 * (w[0] + w[1]))
}

fn absolute_levels(eig: &EigenDecomposition<impl Scalar>, shift: f64) -> Vec<f64> {
    eig.eigenvalues
        .iter()
        .map(|m| (m + shift).abs())
        .chain([0.0])
        .collect()
}

fn unit_vector<T: Scalar>(dim: usize, rng: &mut ChaCha8Rng) -> Vector<T> {
    loop {
        if let Some(v) = Vector::random(dim, rng).normalized() {
            return v;
        }
    }
}

/// Runs the battery selected by `scope` and fills `report`.
pub fn run<T: Scalar>(
    a: &HermitianMatrix<T>,
    scope: Scope,
    config: &RunConfig,
    report: &mut Report,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut battery = Battery {
        report,
        tol_scale: config.tol_scale,
    };
    let eig = match eigen_oracle(a) {
        Ok(e) => e,
        Err(e) => {
            battery.report.checks.push(CheckRecord::failed(
                "eigen_oracle",
                "oracle decomposition",
                e,
            ));
            return;
        }
    };
    if scope.subspaces() {
        subspace_checks(a, &eig, config, &mut rng, &mut battery);
    }
    if scope.family() {
        family_checks(a, &eig, &mut rng, &mut battery);
    }
    if scope.split() {
        split_checks(a, config, &mut rng, &mut battery);
    }
    if scope.quadrature() {
        quadrature_checks(a, &eig, config, &mut rng, &mut battery);
    }
}

fn subspace_checks<T: Scalar>(
    a: &HermitianMatrix<T>,
    eig: &EigenDecomposition<T>,
    config: &RunConfig,
    rng: &mut ChaCha8Rng,
    b: &mut Battery<'_>,
) {
    let rho = eig.spectral_radius();
    let norm = a.frobenius_norm();

    match SubspaceBuilder::new(a) {
        Ok(builder) => {
            let mut worst = CheckOutcome::within(0.0, 1e-9);
            for level in distinct(absolute_levels(eig, 0.0)) {
                let outcome = builder.at(level).map(|f| {
                    CheckOutcome::within(relative(f.invariance_defect(a.as_mat()), norm), 1e-9)
                });
                match outcome {
                    Ok(o) => worst = worst.and(o),
                    Err(e) => {
                        b.push(
                            "subspace_invariance",
                            "Lemma 1 i, A maps F(A, λ) into itself",
                            Err(e),
                        );
                        worst = CheckOutcome::within(f64::INFINITY, 1e-9);
                        break;
                    }
                }
            }
            if worst.residual.is_finite() {
                b.push(
                    "subspace_invariance",
                    "Lemma 1 i, A maps F(A, λ) into itself",
                    Ok(worst),
                );
            }
        }
        Err(e) => b.push(
            "subspace_invariance",
            "Lemma 1 i, A maps F(A, λ) into itself",
            Err(e),
        ),
    }

    let delta = if rho > 0.0 { rho / 4.0 } else { 0.5 };
    let eps = widest_gap_midpoint(absolute_levels(eig, delta)).unwrap_or(0.5);
    b.push(
        "inclusion_shift",
        "Lemma 1 iii, F(A + δ, ε) ⊂ F(A, δ + ε)",
        check_inclusion_shift(a, delta, eps),
    );
    let eps = widest_gap_midpoint(absolute_levels(eig, 0.0)).unwrap_or(0.5);
    b.push(
        "square_identity",
        "Lemma 1 iii, F(A², ε²) = F(A, ε)",
        check_square_identity(a, eps),
    );

    let lowest = eig.min_eigenvalue();
    let above_one = a.shifted(1.0 - lowest);
    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|m| m + 1.0 - lowest).collect();
    let eps = widest_gap_midpoint(shifted.iter().copied()).unwrap_or(shifted[0] + 0.5);
    b.push(
        "inverse_inclusion",
        "Lemma 4, F(A⁻¹, 1/ε)^⊥ ⊂ F(A, ε) for A >= 1",
        check_inverse_inclusion(&above_one, eps),
    );
    let squares: Vec<f64> = eig.eigenvalues.iter().map(|m| m * m + 1.0).collect();
    let eps = widest_gap_midpoint(squares.iter().copied()).unwrap_or(squares[0] + 0.5);
    b.push(
        "s_chain",
        "Lemma 4, F(A² + 1, ε) ⊂ F(A², ε + 1) ⊂ F(A, sqrt(ε + 1))",
        check_s_chain(a, eps),
    );

    // Strictness and sandwich on A itself (norm forms) and on the positive
    // shift A - λ_min (quadratic forms as well).
    let positive = a.shifted(-lowest);
    let positive_levels: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|m| m - lowest)
        .chain([0.0])
        .collect();
    for (op, levels, suffix, strict_anchor, sandwich_anchor) in [
        (
            a,
            absolute_levels(eig, 0.0),
            "",
            "Lemma 2 i, ‖Ax‖ > λ‖x‖ on F(A, λ)^⊥",
            "Lemma 3 i, λ‖x‖ <= ‖Ax‖ <= μ‖x‖ on F(A, μ) ∩ F(A, λ)^⊥",
        ),
        (
            &positive,
            positive_levels,
            "_positive",
            "Lemma 2 ii, ⟨Ax, x⟩ > λ⟨x, x⟩ on F(A, λ)^⊥ for A >= 0",
            "Lemma 3 ii, λ⟨x, x⟩ <= ⟨Ax, x⟩ <= μ⟨x, x⟩ for A >= 0",
        ),
    ] {
        let top = levels.iter().copied().fold(0.0, f64::max);
        match widest_gap_midpoint(levels) {
            Some(lambda) => {
                b.push(
                    &format!("strict_lower{suffix}"),
                    strict_anchor,
                    check_strict_lower(op, lambda, config.trials, rng),
                );
                b.push(
                    &format!("sandwich{suffix}"),
                    sandwich_anchor,
                    check_sandwich(op, lambda, top, config.trials, rng),
                );
            }
            None => {
                let why = "the operator is zero, so F(A, λ)^⊥ = {0}";
                b.vacuous(&format!("strict_lower{suffix}"), strict_anchor, why);
                b.vacuous(&format!("sandwich{suffix}"), sandwich_anchor, why);
            }
        }
    }
}

fn oracle_agreement<T: Scalar>(
    family: &SpectralFamily<T>,
    eig: &EigenDecomposition<T>,
) -> CheckOutcome {
    let values = distinct(eig.eigenvalues.iter().copied());
    let mut points: Vec<f64> = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if let (Some(lo), Some(hi)) = (values.first(), values.last()) {
        points.push(lo - 1.0 - lo.abs());
        points.push(hi + 1.0 + hi.abs());
    }
    let worst = points
        .into_iter()
        .map(|l| {
            let oracle = specfam::linalg::projector_from_basis(&eig.select(|m| m <= l));
            family.evaluate(l).distance(&oracle)
        })
        .fold(0.0, f64::max);
    CheckOutcome::within(worst, INCLUSION_TOL)
}

fn family_checks<T: Scalar>(
    a: &HermitianMatrix<T>,
    eig: &EigenDecomposition<T>,
    rng: &mut ChaCha8Rng,
    b: &mut Battery<'_>,
) {
    let norm = a.frobenius_norm();
    let mut built: Vec<(Route, SpectralFamily<T>)> = Vec::new();
    for (route, tag) in [(Route::Shift, "shift"), (Route::Split, "split")] {
        let family = match build_general(a, route) {
            Ok(f) => f,
            Err(e) => {
                b.push(
                    &format!("family_{tag}"),
                    "Theorem, existence of a spectral family",
                    Err(e),
                );
                continue;
            }
        };
        let d = family.diagnostics();
        b.push(
            &format!("family_orthogonality_{tag}"),
            "Theorem, E(λ)E(μ) = E(min(λ, μ))",
            Ok(CheckOutcome::within(d.orthogonality, ORTHOGONALITY_TOL)),
        );
        b.push(
            &format!("family_completeness_{tag}"),
            "Theorem, E(λ) → I as λ → ∞",
            Ok(CheckOutcome::within(d.completeness, COMPLETENESS_TOL)),
        );
        b.push(
            &format!("family_monotone_{tag}"),
            MONOTONE,
            Ok(CheckOutcome::within(
                if d.monotone { 0.0 } else { 1.0 },
                0.0,
            )),
        );
        b.push(
            &format!("family_commutation_{tag}"),
            "Theorem, E(λ) A = A E(λ)",
            Ok(CheckOutcome::within(
                relative(family.commutation_defect(a), norm),
                1e-9,
            )),
        );
        b.push(
            &format!("oracle_agreement_{tag}"),
            "Theorem, E(λ) is the spectral projector of A",
            Ok(oracle_agreement(&family, eig)),
        );
        b.push(
            &format!("reconstruction_{tag}"),
            "Theorem, A = ∫ λ dE(λ)",
            Ok(check_reconstruction(a, &family)),
        );
        built.push((route, family));
    }
    if let [(_, shift), (_, split)] = built.as_slice() {
        b.push(
            "route_equality",
            "Theorem, the spectral family is unique",
            Ok(CheckOutcome::within(shift.distance(split), INCLUSION_TOL)),
        );
    }
    b.push(
        "density",
        "Lemma 4, the union of F(A, ε) is dense",
        density_check(a),
    );

    if let Some((route, family)) = built.into_iter().next() {
        let x = unit_vector::<T>(a.dim(), rng);
        let cuts = distinct(family.jump_points());
        match domain_profile(a, &family, &x, &cuts) {
            Ok(profile) => {
                let residual = match profile.norms.last() {
                    Some(&last) => relative((last - profile.full_norm).abs(), profile.full_norm),
                    None => 0.0,
                };
                let mut outcome = CheckOutcome::within(residual, specfam::family::PROFILE_TOL);
                outcome.passed &= profile.monotone && profile.saturated;
                b.push(
                    "domain_profile",
                    "Lemma 4.5 i, ‖A E(n) x‖ increases to ‖Ax‖",
                    Ok(outcome),
                );
                b.report.profile = Some(ProfileSummary {
                    label: PROFILE_LABEL,
                    profile,
                });
            }
            Err(e) => b.push(
                "domain_profile",
                "Lemma 4.5 i, ‖A E(n) x‖ increases to ‖Ax‖",
                Err(e),
            ),
        }
        b.report.family = Some(FamilySummary {
            route,
            jump_points: family.jump_points(),
            increment_ranks: family.increment_ranks(),
            diagnostics: family.diagnostics(),
        });
    }
}

fn split_checks<T: Scalar>(
    a: &HermitianMatrix<T>,
    config: &RunConfig,
    rng: &mut ChaCha8Rng,
    b: &mut Battery<'_>,
) {
    let s: SplitDecomposition<T> = match split(a) {
        Ok(s) => s,
        Err(e) => {
            b.push("split", "Lemma 5, A = A₋ ⊕ A₊", Err(e));
            return;
        }
    };
    let r = match s.residuals(a) {
        Ok(r) => r,
        Err(e) => {
            b.push("split_residuals", "Lemma 5, A = A₋ ⊕ A₊", Err(e));
            return;
        }
    };
    let norm = r.scale;
    b.push(
        "transform_bound",
        "Lemma 5, ‖A(1 + A²)⁻¹‖ <= 1/2",
        Ok(CheckOutcome::within(r.transform_norm - 0.5, 1e-12)),
    );
    b.push(
        "transform_commutation",
        "Lemma 5, EB = BE",
        Ok(CheckOutcome::within(r.transform_commutation, 1e-10)),
    );
    b.push(
        "resolvent_commutation",
        "Lemma 5, E(1 + A²)⁻¹ = (1 + A²)⁻¹E",
        Ok(CheckOutcome::within(r.resolvent_commutation, 1e-10)),
    );
    b.push(
        "reducing",
        "Lemma 5, AE = EA",
        Ok(CheckOutcome::within(relative(r.reducing, norm), 1e-9)),
    );
    b.push(
        "split_spectra",
        "Lemma 5, spec(A₋) ∪ spec(A₊) = spec(A)",
        Ok(CheckOutcome::within(r.spectra, 1e-8)),
    );
    b.push(
        "split_reconstruction",
        "Lemma 5, A = A₋ ⊕ A₊",
        Ok(CheckOutcome::within(relative(r.reconstruction, norm), 1e-9)),
    );
    if s.rank_minus() > 0 {
        b.push(
            "nonpositive_part",
            "Lemma 5, A₋ <= 0",
            Ok(CheckOutcome::within(relative(r.max_minus, norm), 1e-9)),
        );
    } else {
        b.vacuous("nonpositive_part", "Lemma 5, A₋ <= 0", "H₋ = {0}");
    }
    if s.rank_plus() > 0 {
        b.push(
            "nonnegative_part",
            "Lemma 5, A₊ >= 0",
            Ok(CheckOutcome::within(relative(-r.min_plus, norm), 1e-9)),
        );
    } else {
        b.vacuous("nonnegative_part", "Lemma 5, A₊ >= 0", "H₊ = {0}");
    }
    b.push(
        "sign_inequalities",
        "Lemma 5, ⟨Bx, x⟩ <= 0 on H₋ and >= 0 on H₊",
        check_sign_inequalities(a, &s, config.trials, rng),
    );
    let mut form: CoreResult<CheckOutcome> = Ok(CheckOutcome::within(0.0, 1e-9));
    for _ in 0..config.trials {
        let x = unit_vector::<T>(a.dim(), rng);
        form = form.and_then(|acc| Ok(acc.and(check_form_identity(a, &x)?)));
    }
    b.push(
        "form_identity",
        "Lemma 5, ⟨Ax, x⟩ = ⟨Bx, x⟩ + ⟨BAx, Ax⟩",
        form,
    );

    let minus = eigen_oracle(&s.a_minus)
        .map(|e| e.eigenvalues)
        .unwrap_or_default();
    let plus = eigen_oracle(&s.a_plus)
        .map(|e| e.eigenvalues)
        .unwrap_or_default();
    b.report.split = Some(SplitSummary {
        beta: s.beta,
        rank_e: s.rank_minus(),
        rank_complement: s.rank_plus(),
        spectrum_minus: Extremes::of(&minus),
        spectrum_plus: Extremes::of(&plus),
        residuals: r,
    });
}

fn quadrature_checks<T: Scalar>(
    a: &HermitianMatrix<T>,
    eig: &EigenDecomposition<T>,
    config: &RunConfig,
    rng: &mut ChaCha8Rng,
    b: &mut Battery<'_>,
) {
    let shift = eig.min_eigenvalue();
    let positive = a.shifted(-shift);
    let family = match build_positive(&positive) {
        Ok(f) => f,
        Err(e) => {
            b.push(
                "quadrature_family",
                "Theorem, Riemann–Stieltjes sums",
                Err(e),
            );
            return;
        }
    };
    let x = unit_vector::<T>(a.dim(), rng);
    let n = smallest_cap(&family, &x);
    let k_max = config.k_max.max(1);

    let mut table = Vec::new();
    let mut first = CheckOutcome::within(f64::NEG_INFINITY, BOUND_SLACK);
    let mut second = CheckOutcome::within(f64::NEG_INFINITY, BOUND_SLACK);
    let mut identities = CheckOutcome::within(0.0, PARTITION_TOL);
    let mut cells = CheckOutcome::within(f64::NEG_INFINITY, 0.0);
    let mut failure = None;
    for k in 1..=k_max {
        let sum = match partition_sum(&positive, &family, &x, n, k) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        first = first.and(CheckOutcome::within(sum.err1 - sum.bound1, BOUND_SLACK));
        second = second.and(CheckOutcome::within(sum.err2 - sum.bound2, BOUND_SLACK));
        let defect = sum
            .pythagoras_defect()
            .max(sum.sum_defect(&x))
            .max(sum.orthogonality_defect());
        identities = identities.and(CheckOutcome::within(defect, PARTITION_TOL));
        match per_cell_bounds(&positive, &family, &x, n, k) {
            Ok(c) => cells = cells.and(c.outcome()),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        table.push(ErrorRow {
            k,
            err1: sum.err1,
            bound1: sum.bound1,
            err2: sum.err2,
            bound2: sum.bound2,
        });
    }
    if let Some(e) = failure {
        b.push("quadrature", "Theorem, Riemann–Stieltjes sums", Err(e));
        return;
    }
    b.push(
        "rs_bound_first",
        "Theorem, |⟨Ax, x⟩ − Σ λ_i ‖x_i‖²| <= ‖x‖²/k",
        Ok(first),
    );
    b.push(
        "rs_bound_second",
        "Theorem, |‖Ax‖² − Σ λ_i² ‖x_i‖²| <= 2n‖x‖²/k",
        Ok(second),
    );
    b.push(
        "per_cell_bounds",
        "Theorem, per-cell estimates on x_i = E(λ_i)x − E(λ_{i−1})x",
        Ok(cells),
    );
    b.push(
        "partition_identities",
        "Theorem, x = Σ x_i, ‖x‖² = Σ ‖x_i‖², ⟨x_i, x_j⟩ = 0",
        Ok(identities),
    );
    let dyadic: Vec<u64> = dyadic_ks(k_max);
    let decay = dyadic
        .windows(2)
        .map(|w| table[w[1] as usize - 1].err1 - table[w[0] as usize - 1].err1)
        .fold(f64::NEG_INFINITY, f64::max);
    b.push(
        "dyadic_decay",
        "Theorem, error does not grow under dyadic refinement",
        Ok(if dyadic.len() < 2 {
            CheckOutcome::within(0.0, 1e-12)
        } else {
            CheckOutcome::within(decay, 1e-12)
        }),
    );

    match build_general(a, Route::Shift) {
        Ok(general) => {
            let mut integral: CoreResult<CheckOutcome> = Ok(CheckOutcome::within(0.0, 1e-9));
            let mut bilinear: CoreResult<CheckOutcome> = Ok(CheckOutcome::within(0.0, 1e-9));
            for _ in 0..config.trials {
                let u = unit_vector::<T>(a.dim(), rng);
                let v = unit_vector::<T>(a.dim(), rng);
                integral =
                    integral.and_then(|acc| Ok(acc.and(check_integral_form(a, &general, &u)?)));
                bilinear =
                    bilinear.and_then(|acc| Ok(acc.and(check_bilinear_form(a, &general, &u, &v)?)));
            }
            b.push(
                "integral_forms",
                "Theorem, ⟨Ax, x⟩ = ∫ λ d⟨E(λ)x, x⟩ and ‖Ax‖² = ∫ λ² d⟨E(λ)x, x⟩",
                integral,
            );
            b.push(
                "bilinear_form",
                "Concluding remark, ⟨Ax, y⟩ = ∫ λ d⟨E(λ)x, y⟩ by polarization",
                bilinear,
            );
            if b.report.family.is_none() {
                b.push(
                    "reconstruction_shift",
                    "Theorem, A = ∫ λ dE(λ)",
                    Ok(check_reconstruction(a, &general)),
                );
                b.report.family = Some(FamilySummary {
                    route: Route::Shift,
                    jump_points: general.jump_points(),
                    increment_ranks: general.increment_ranks(),
                    diagnostics: general.diagnostics(),
                });
            }
        }
        Err(e) => b.push("integral_forms", "Theorem, ∫ λ dE(λ)", Err(e)),
    }

    b.report.quadrature = Some(QuadratureSummary {
        shift,
        n,
        norm_sqr: x.norm_sqr(),
        table,
    });
}

/// `E(λ)` from the oracle, for callers that want to compare by hand.
pub fn oracle_projector<T: Scalar>(eig: &EigenDecomposition<T>, lambda: f64) -> Projector<T> {
    specfam::linalg::projector_from_basis(&eig.select(|m| m <= lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_midpoints() {
        assert_eq!(widest_gap_midpoint([0.0, 1.0, 5.0]), Some(3.0));
        assert_eq!(widest_gap_midpoint([2.0, 2.0]), None);
        assert_eq!(widest_gap_midpoint([1.0, 1.0 + 1e-12, 0.0]), Some(0.5));
        assert_eq!(distinct([3.0, 1.0, 3.0]), vec![1.0, 3.0]);
    }
}
