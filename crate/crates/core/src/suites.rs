//! Randomized suites that exercise the derivative theory over generated
//! functions: the Clarke bound `‖F_C(x̄)(h)‖ ≤ K′‖h‖`, agreement of the
//! Clarke and directional derivatives for convex Lipschitz functions,
//! sublinearity of `h ↦ F_C(x̄)(h)`, and the limsup calculus rules.
//!
//! Base points are drawn from `[-1,1]ⁿ`, well inside the `[-2,2]ⁿ` boxes of
//! the generated functions, so the default `δ₀ = 0.5` never reaches the
//! boundary.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checks::{check_lipschitz, subadditive_violation};
use crate::derivative::{clarke_directional_gap, upper_clarke, DerivativeQuery};
use crate::expr::Expr;
use crate::family::{family_member, FamilyKind};
use crate::interval::Interval;
use crate::ivf::{DomainBox, IntervalFn, Ivf, NormFn, ScaledFn, SumFn};
use crate::limit::{limsup_at, LimitError, ScheduleOverrides, DEFAULT_SEED, DEFAULT_TOL};
use crate::sampling::{norm, stream_rng, unit_direction};

/// Failing cases kept in a report.
const KEPT_FAILURES: usize = 10;
const LIPSCHITZ_TRIALS: usize = 20_000;
/// Half-width of the box around `x̄` on which `K′` is estimated.
const LOCAL_RADIUS: f64 = 0.5;
pub const HOMOGENEITY_FACTORS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 10.0];
/// The sublinearity suite needs three Clarke estimates per pair; unless
/// overridden it samples this many points and λ values per level.
pub const PAIR_SAMPLES: usize = 512;
pub const PAIR_LAMBDAS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tol: f64,
    pub overrides: ScheduleOverrides,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            overrides: ScheduleOverrides::default(),
        }
    }
}

impl SuiteConfig {
    fn query<'a, F: IntervalFn + ?Sized>(&self, f: &'a F, xbar: &[f64], h: &[f64]) -> DerivativeQuery<'a, F> {
        DerivativeQuery::new(f, xbar, h)
            .with_schedule(self.overrides.apply(f.dims()))
            .with_tol(self.tol)
    }

    /// Stream for member `index` of a suite; `salt` separates suites.
    fn rng(&self, salt: u64, index: usize) -> ChaCha8Rng {
        stream_rng(self.seed ^ salt, index as u64)
    }
}

fn base_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let len = rng.random_range(0.5..2.0);
    unit_direction(n, rng).into_iter().map(|c| c * len).collect()
}

fn local_region(f: &Ivf, xbar: &[f64]) -> DomainBox {
    let around = DomainBox::new(xbar.iter().map(|c| (c - LOCAL_RADIUS, c + LOCAL_RADIUS)).collect())
        .expect("finite center");
    around.intersect(f.domain()).unwrap_or_else(|| f.domain().clone())
}

fn keep<T>(failures: &mut Vec<T>, case: T) {
    if failures.len() < KEPT_FAILURES {
        failures.push(case);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCase {
    pub member: usize,
    pub xbar: Vec<f64>,
    pub h: Vec<f64>,
    pub k_estimate: f64,
    pub value: Option<Interval>,
    pub exists: bool,
    pub bound: f64,
    pub error: Option<String>,
}

/// Upper Clarke derivatives of Lipschitz family members exist and obey
/// `‖F_C(x̄)(h)‖ ≤ K′‖h‖ + 3·tol`, with `K′` estimated on a box around `x̄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClarkeBoundReport {
    pub members: usize,
    pub directions: usize,
    pub cases: usize,
    pub exists: usize,
    pub within_bound: usize,
    /// Largest `‖F_C(x̄)(h)‖ − K′‖h‖` seen.
    pub worst_excess: f64,
    pub failures: Vec<BoundCase>,
    pub passed: bool,
}

pub fn clarke_bound_suite(members: usize, directions: usize, cfg: &SuiteConfig) -> ClarkeBoundReport {
    let slack = 3.0 * cfg.tol;
    let (mut cases, mut exists, mut within) = (0, 0, 0);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for m in 0..members {
        let f = family_member(FamilyKind::Lipschitz, cfg.seed, m as u64);
        let n = f.dims();
        let mut rng = cfg.rng(0x3131, m);
        let xbar = base_point(&mut rng, n);
        let k = check_lipschitz(&f, &local_region(&f, &xbar), LIPSCHITZ_TRIALS, cfg.seed)
            .map(|r| r.k_estimate)
            .unwrap_or(f64::INFINITY);
        for _ in 0..directions {
            let h = direction(&mut rng, n);
            let bound = k * norm(&h) + slack;
            cases += 1;
            let case = |value, ok, error| BoundCase {
                member: m,
                xbar: xbar.clone(),
                h: h.clone(),
                k_estimate: k,
                value,
                exists: ok,
                bound,
                error,
            };
            match upper_clarke(&cfg.query(&f, &xbar, &h)) {
                Ok(r) => {
                    let size = r.value.norm();
                    worst = worst.max(size - k * norm(&h));
                    exists += r.exists as usize;
                    let fits = size <= bound;
                    within += fits as usize;
                    if !(r.exists && fits) {
                        keep(&mut failures, case(Some(r.value), r.exists, None));
                    }
                }
                Err(e) => keep(&mut failures, case(None, false, Some(e.to_string()))),
            }
        }
    }
    ClarkeBoundReport {
        members,
        directions,
        cases,
        exists,
        within_bound: within,
        worst_excess: worst,
        failures,
        passed: exists == cases && within == cases,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapCase {
    pub member: usize,
    pub xbar: Vec<f64>,
    pub h: Vec<f64>,
    pub gap: Option<Interval>,
    pub error: Option<String>,
}

/// For convex Lipschitz members, `F_C(x̄)(h) ⊖gH F_D(x̄)(h)` is within
/// `3·tol` of zero whenever both estimates converge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexGapReport {
    pub members: usize,
    pub directions: usize,
    pub cases: usize,
    pub convergent: usize,
    pub within_bound: usize,
    pub worst_gap: f64,
    pub failures: Vec<GapCase>,
    pub passed: bool,
}

/// Share of cases that must converge for the convex suite to pass.
pub const CONVERGENT_SHARE: f64 = 0.95;

pub fn convex_gap_suite(members: usize, directions: usize, cfg: &SuiteConfig) -> ConvexGapReport {
    let bound = 3.0 * cfg.tol;
    let (mut cases, mut convergent, mut within) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for m in 0..members {
        let f = family_member(FamilyKind::ConvexLipschitz, cfg.seed, m as u64);
        let n = f.dims();
        let mut rng = cfg.rng(0x3232, m);
        let xbar = base_point(&mut rng, n);
        for _ in 0..directions {
            let h = direction(&mut rng, n);
            cases += 1;
            let case = |gap, error| GapCase {
                member: m,
                xbar: xbar.clone(),
                h: h.clone(),
                gap,
                error,
            };
            match clarke_directional_gap(&cfg.query(&f, &xbar, &h)) {
                Ok(gap) => {
                    convergent += 1;
                    worst = worst.max(gap.norm());
                    if gap.norm() <= bound {
                        within += 1;
                    } else {
                        keep(&mut failures, case(Some(gap), None));
                    }
                }
                Err(e) => keep(&mut failures, case(None, Some(e.to_string()))),
            }
        }
    }
    ConvexGapReport {
        members,
        directions,
        cases,
        convergent,
        within_bound: within,
        worst_gap: worst,
        failures,
        passed: within == convergent && convergent as f64 >= CONVERGENT_SHARE * cases as f64,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SublinearFailure {
    Homogeneity {
        member: usize,
        alpha: f64,
        h: Vec<f64>,
        left: Interval,
        right: Interval,
    },
    Subadditivity {
        member: usize,
        h1: Vec<f64>,
        h2: Vec<f64>,
        left: Interval,
        right: Interval,
    },
    Nonexistent {
        member: usize,
        h: Vec<f64>,
        error: String,
    },
}

/// `h ↦ F_C(x̄)(h)` is positively homogeneous (within `(1+α)·3·tol`) and
/// satisfies `F_C(h₁+h₂) ⊁ F_C(h₁) ⊕ F_C(h₂)` with `3·tol` inflation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClarkeSublinearReport {
    pub members: usize,
    pub pairs: usize,
    pub homogeneity_checks: usize,
    pub homogeneity_failures: usize,
    pub subadditivity_checks: usize,
    pub subadditivity_failures: usize,
    pub nonexistent: usize,
    /// Largest `‖F_C(αh) ⊖gH α⊙F_C(h)‖ / ((1+α)·3·tol)`.
    pub worst_homogeneity_ratio: f64,
    /// Whether `F_C(h₁+h₂) ⪯ F_C(h₁) ⊕ F_C(h₂)` also held (within `3·tol`)
    /// on every pair.
    pub stronger_form: bool,
    pub failures: Vec<SublinearFailure>,
    pub passed: bool,
}

pub fn clarke_sublinear_suite(members: usize, pairs: usize, cfg: &SuiteConfig) -> ClarkeSublinearReport {
    let slack = 3.0 * cfg.tol;
    let mut report = ClarkeSublinearReport {
        members,
        pairs,
        homogeneity_checks: 0,
        homogeneity_failures: 0,
        subadditivity_checks: 0,
        subadditivity_failures: 0,
        nonexistent: 0,
        worst_homogeneity_ratio: 0.0,
        stronger_form: true,
        failures: Vec::new(),
        passed: false,
    };
    let mut cfg = cfg.clone();
    cfg.overrides.samples_per_level.get_or_insert(PAIR_SAMPLES);
    cfg.overrides.lambda_samples.get_or_insert(PAIR_LAMBDAS);
    let cfg = &cfg;
    for m in 0..members {
        let f = family_member(FamilyKind::Lipschitz, cfg.seed, m as u64);
        let n = f.dims();
        let mut rng = cfg.rng(0x3333, m);
        let xbar = base_point(&mut rng, n);
        let fc = |h: &[f64], report: &mut ClarkeSublinearReport| -> Option<Interval> {
            match upper_clarke(&cfg.query(&f, &xbar, h)) {
                Ok(r) if r.exists => Some(r.value),
                other => {
                    let error = match other {
                        Ok(_) => "estimate did not converge".to_string(),
                        Err(e) => e.to_string(),
                    };
                    report.nonexistent += 1;
                    let case = SublinearFailure::Nonexistent { member: m, h: h.to_vec(), error };
                    keep(&mut report.failures, case);
                    None
                }
            }
        };

        let h = direction(&mut rng, n);
        if let Some(base) = fc(&h, &mut report) {
            for alpha in HOMOGENEITY_FACTORS {
                let ah: Vec<f64> = h.iter().map(|c| c * alpha).collect();
                let Some(left) = fc(&ah, &mut report) else { continue };
                let right = base.scalar_mul(alpha).expect("finite estimate");
                let gap = left.gh_diff(right).expect("finite estimates").norm();
                let allowed = (1.0 + alpha) * slack;
                report.homogeneity_checks += 1;
                report.worst_homogeneity_ratio = report.worst_homogeneity_ratio.max(gap / allowed);
                if gap > allowed {
                    report.homogeneity_failures += 1;
                    let case = SublinearFailure::Homogeneity { member: m, alpha, h: h.clone(), left, right };
                    keep(&mut report.failures, case);
                }
            }
        }

        for _ in 0..pairs {
            let (h1, h2) = (direction(&mut rng, n), direction(&mut rng, n));
            let sum: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
            let (Some(a), Some(b), Some(left)) = (fc(&h1, &mut report), fc(&h2, &mut report), fc(&sum, &mut report))
            else {
                continue;
            };
            let right = a.add(b).expect("finite estimates");
            report.subadditivity_checks += 1;
            report.stronger_form &= left.precedes_within(&right, slack);
            if subadditive_violation(left, right, slack) {
                report.subadditivity_failures += 1;
                let case = SublinearFailure::Subadditivity { member: m, h1, h2, left, right };
                keep(&mut report.failures, case);
            }
        }
    }
    report.passed =
        report.nonexistent == 0 && report.homogeneity_failures == 0 && report.subadditivity_failures == 0;
    report
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LimsupFailure {
    Subadditivity { pair: usize, xbar: Vec<f64>, sum: Interval, bound: Interval },
    Homogeneity { pair: usize, xbar: Vec<f64>, lambda: f64, scaled: Interval, expected: Interval },
    Norm { pair: usize, xbar: Vec<f64>, norm_of_limsup: f64, limsup_of_norm: f64 },
    Estimate { pair: usize, xbar: Vec<f64>, error: String },
}

/// `limsup(F⊕G) ⪯ limsup F ⊕ limsup G`, `limsup(λ⊙F) = λ⊙limsup F` and
/// `‖limsup F‖ ≤ limsup ‖F‖` on random polynomial-scale pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimsupRulesReport {
    pub pairs: usize,
    pub points: usize,
    pub subadditive: usize,
    pub homogeneous: usize,
    pub norm_bounded: usize,
    pub failures: Vec<LimsupFailure>,
    pub passed: bool,
}

fn random_polynomial(rng: &mut ChaCha8Rng, n: usize) -> Expr {
    let mut p = Expr::c((rng.random_range(-1.0..1.0) * 100.0f64).round() / 100.0);
    for _ in 0..rng.random_range(1..=3) {
        let mut term = Expr::c((rng.random_range(-2.0..2.0) * 100.0f64).round() / 100.0);
        for _ in 0..rng.random_range(1..=3) {
            term = term * Expr::var(rng.random_range(0..n));
        }
        p = p + term;
    }
    p
}

/// A polynomial scale function times a random interval constant on `[-2,2]ⁿ`.
pub fn polynomial_ivf(rng: &mut ChaCha8Rng, n: usize) -> Ivf {
    let lo = (rng.random_range(-2.0..2.0) * 100.0f64).round() / 100.0;
    let w = (rng.random_range(0.0..2.0) * 100.0f64).round() / 100.0;
    let c = Interval::new(lo, lo + w).expect("ordered");
    Ivf::scale_form(random_polynomial(rng, n), c, DomainBox::symmetric(n, 2.0)).expect("scale form")
}

pub fn limsup_rules_suite(pairs: usize, points: usize, cfg: &SuiteConfig) -> LimsupRulesReport {
    let tol = cfg.tol;
    let mut report = LimsupRulesReport {
        pairs,
        points,
        subadditive: 0,
        homogeneous: 0,
        norm_bounded: 0,
        failures: Vec::new(),
        passed: false,
    };
    for p in 0..pairs {
        let mut rng = cfg.rng(0x3131_0000, p);
        let n = rng.random_range(1..=2);
        let (f, g) = (polynomial_ivf(&mut rng, n), polynomial_ivf(&mut rng, n));
        let sched = cfg.overrides.apply(n);
        for _ in 0..points {
            let xbar = base_point(&mut rng, n);
            let lambda = rng.random_range(0.0..5.0);
            let outcome = (|| -> Result<(), LimitError> {
                let lf = limsup_at(&f, &xbar, &sched, tol)?.value;
                let lg = limsup_at(&g, &xbar, &sched, tol)?.value;
                let sum = limsup_at(&SumFn { f: &f, g: &g }, &xbar, &sched, tol)?.value;
                let bound = lf.add(lg).map_err(crate::ivf::EvalError::from)?;
                if sum.precedes_within(&bound, 3.0 * tol) {
                    report.subadditive += 1;
                } else {
                    let case = LimsupFailure::Subadditivity { pair: p, xbar: xbar.clone(), sum, bound };
                    keep(&mut report.failures, case);
                }

                let scaled = limsup_at(&ScaledFn { lambda, f: &f }, &xbar, &sched, tol)?.value;
                let expected = lf.scalar_mul(lambda).map_err(crate::ivf::EvalError::from)?;
                let gap = scaled.gh_diff(expected).map_err(crate::ivf::EvalError::from)?.norm();
                if gap <= lambda * tol + tol {
                    report.homogeneous += 1;
                } else {
                    let case = LimsupFailure::Homogeneity { pair: p, xbar: xbar.clone(), lambda, scaled, expected };
                    keep(&mut report.failures, case);
                }

                let limsup_of_norm = limsup_at(&NormFn { f: &f }, &xbar, &sched, tol)?.value.hi();
                if lf.norm() <= limsup_of_norm + 2.0 * tol {
                    report.norm_bounded += 1;
                } else {
                    let case = LimsupFailure::Norm {
                        pair: p,
                        xbar: xbar.clone(),
                        norm_of_limsup: lf.norm(),
                        limsup_of_norm,
                    };
                    keep(&mut report.failures, case);
                }
                Ok(())
            })();
            if let Err(e) = outcome {
                let case = LimsupFailure::Estimate { pair: p, xbar: xbar.clone(), error: e.to_string() };
                keep(&mut report.failures, case);
            }
        }
    }
    let total = pairs * points;
    report.passed = report.subadditive == total && report.homogeneous == total && report.norm_bounded == total;
    report
}
