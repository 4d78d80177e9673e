//! Supremum, infimum, limsup and liminf of interval-valued functions.
//!
//! Limits are estimated over a geometric sequence of punctured balls
//! `B(x̄, δₖ) ∖ {x̄}`, `δₖ = δ₀·ratioᵏ`, taking the componentwise extremum of
//! the endpoint functions on each level. An estimate has converged once two
//! consecutive level-to-level residuals are within tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;
use crate::ivf::{EvalError, IntervalFn};
use crate::sampling::{self, distance, norm};

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Any level endpoint beyond this magnitude is a divergence verdict.
pub const DIVERGENCE_CAP: f64 = 1e12;
/// Level values that keep growing geometrically past this magnitude are
/// treated as divergent even when the cap is out of reach.
const TREND_FLOOR: f64 = 1e4;
const TREND_GROWTH: f64 = 1.5;
const TREND_STEPS: usize = 3;
const MONOTONE_SLACK: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("region is empty")]
    EmptyRegion,
    #[error("point has {got} coordinates, domain has {want}")]
    Dimension { want: usize, got: usize },
    #[error("no admissible sample at level {level} (radius {radius:e}); the point may be isolated from the domain")]
    BoundaryStarvation { level: usize, radius: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Radii, sample sizes and seed for the shrinking-ball estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShrinkSchedule {
    pub delta0: f64,
    pub ratio: f64,
    pub max_levels: usize,
    /// Convergence is not declared before this many levels; a plateau on
    /// large balls (a kink a short distance away) is not a limit.
    pub min_levels: usize,
    pub samples_per_level: usize,
    /// Size of the λ grid used by the Clarke estimators.
    pub lambda_samples: usize,
    pub seed: u64,
}

impl Default for ShrinkSchedule {
    fn default() -> Self {
        ShrinkSchedule {
            delta0: 0.5,
            ratio: 0.5,
            max_levels: 20,
            min_levels: 8,
            samples_per_level: 4096,
            lambda_samples: 16,
            seed: DEFAULT_SEED,
        }
    }
}

impl ShrinkSchedule {
    /// Defaults with the sample count scaled as `4096·2ⁿ⁻²` for `n > 2`,
    /// capped at 65536.
    pub fn for_dims(n: usize) -> ShrinkSchedule {
        let samples = if n <= 2 {
            4096
        } else {
            4096usize.saturating_mul(1 << (n - 2).min(16)).min(65536)
        };
        ShrinkSchedule {
            samples_per_level: samples,
            ..ShrinkSchedule::default()
        }
    }

    pub fn delta(&self, level: usize) -> f64 {
        self.delta0 * self.ratio.powi(level as i32)
    }

    /// Rejects schedules whose last radius is lost in rounding at `xbar`.
    pub fn validate(&self, xbar: &[f64]) -> Result<(), LimitError> {
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(LimitError::Schedule(format!("delta0 must be positive, got {}", self.delta0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(LimitError::Schedule(format!("ratio must lie in (0,1), got {}", self.ratio)));
        }
        if self.max_levels < 3 {
            return Err(LimitError::Schedule(format!(
                "at least 3 levels are needed, got {}",
                self.max_levels
            )));
        }
        if self.min_levels > self.max_levels {
            return Err(LimitError::Schedule(format!(
                "min_levels {} exceeds max_levels {}",
                self.min_levels, self.max_levels
            )));
        }
        if self.samples_per_level == 0 || self.lambda_samples == 0 {
            return Err(LimitError::Schedule("sample counts must be positive".into()));
        }
        let floor = 10.0 * f64::EPSILON * (1.0 + norm(xbar));
        let last = self.delta(self.max_levels);
        if last <= floor {
            return Err(LimitError::Schedule(format!(
                "final radius {last:e} is below the rounding floor {floor:e} at this point"
            )));
        }
        Ok(())
    }
}

/// Per-field replacements for the dimension-dependent default schedule.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleOverrides {
    pub delta0: Option<f64>,
    pub ratio: Option<f64>,
    pub max_levels: Option<usize>,
    pub min_levels: Option<usize>,
    pub samples_per_level: Option<usize>,
    pub lambda_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl ScheduleOverrides {
    pub fn apply(&self, dims: usize) -> ShrinkSchedule {
        let base = ShrinkSchedule::for_dims(dims);
        ShrinkSchedule {
            delta0: self.delta0.unwrap_or(base.delta0),
            ratio: self.ratio.unwrap_or(base.ratio),
            max_levels: self.max_levels.unwrap_or(base.max_levels),
            min_levels: self.min_levels.unwrap_or(base.min_levels).min(self.max_levels.unwrap_or(base.max_levels)),
            samples_per_level: self.samples_per_level.unwrap_or(base.samples_per_level),
            lambda_samples: self.lambda_samples.unwrap_or(base.lambda_samples),
            seed: self.seed.unwrap_or(base.seed),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converged,
    Divergent,
    Stalled,
}

/// A limit estimate with the per-level trace it was read from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: Interval,
    pub level_trace: Vec<Interval>,
    /// Radius (or λ) of each traced level.
    pub radii: Vec<f64>,
    pub converged: bool,
    pub divergent: bool,
    /// `‖levelₖ ⊖gH levelₖ₋₁‖` for the last two levels.
    pub residual: f64,
    pub verdict: Verdict,
    /// Whether the trace respects the expected monotone envelope
    /// (nonincreasing for suprema, nondecreasing for infima) within `10·tol`.
    pub monotone: bool,
    /// Samples dropped because the function could not be evaluated there.
    pub skipped: usize,
}

impl LimitEstimate {
    pub fn levels(&self) -> usize {
        self.level_trace.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Extremum {
    Sup,
    Inf,
}

/// Running endpoint extrema over a set of intervals. Merging is
/// commutative, so parallel and serial reductions agree exactly.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Acc {
    pub lo_min: f64,
    pub lo_max: f64,
    pub hi_min: f64,
    pub hi_max: f64,
    pub count: usize,
    pub skipped: usize,
}

impl Acc {
    pub fn empty() -> Acc {
        Acc {
            lo_min: f64::INFINITY,
            lo_max: f64::NEG_INFINITY,
            hi_min: f64::INFINITY,
            hi_max: f64::NEG_INFINITY,
            count: 0,
            skipped: 0,
        }
    }

    pub fn one(v: Interval) -> Acc {
        Acc {
            lo_min: v.lo(),
            lo_max: v.lo(),
            hi_min: v.hi(),
            hi_max: v.hi(),
            count: 1,
            skipped: 0,
        }
    }

    pub fn skip() -> Acc {
        Acc {
            skipped: 1,
            ..Acc::empty()
        }
    }

    pub fn merge(self, o: Acc) -> Acc {
        Acc {
            lo_min: self.lo_min.min(o.lo_min),
            lo_max: self.lo_max.max(o.lo_max),
            hi_min: self.hi_min.min(o.hi_min),
            hi_max: self.hi_max.max(o.hi_max),
            count: self.count + o.count,
            skipped: self.skipped + o.skipped,
        }
    }

    pub fn endpoints(&self, ext: Extremum) -> (f64, f64) {
        match ext {
            Extremum::Sup => (self.lo_max, self.hi_max),
            Extremum::Inf => (self.lo_min, self.hi_min),
        }
    }
}

/// One level's endpoint pair.
pub(crate) struct LevelValue {
    pub lo: f64,
    pub hi: f64,
    pub skipped: usize,
}

fn grows(seq: &[f64]) -> bool {
    seq.windows(2).all(|w| {
        w[0] != 0.0 && w[0].signum() == w[1].signum() && w[1].abs() >= TREND_GROWTH * w[0].abs()
    }) && seq.last().is_some_and(|v| v.abs() >= TREND_FLOOR)
}

/// Drives the level loop shared by every shrinking estimator. `level`
/// returns `None` for a level that should be skipped.
pub(crate) fn shrink<L>(
    sched: &ShrinkSchedule,
    tol: f64,
    envelope: Option<Extremum>,
    mut level: L,
) -> Result<Option<LimitEstimate>, LimitError>
where
    L: FnMut(usize, f64) -> Result<Option<LevelValue>, LimitError>,
{
    let mut trace: Vec<Interval> = Vec::new();
    let mut radii = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();
    let mut skipped = 0;
    let mut divergent = false;
    let mut converged = false;

    for k in 0..sched.max_levels {
        let delta = sched.delta(k);
        let Some(v) = level(k, delta)? else { continue };
        skipped += v.skipped;
        let (lo, hi) = (v.lo.min(v.hi), v.lo.max(v.hi));
        if !(lo.abs() <= DIVERGENCE_CAP && hi.abs() <= DIVERGENCE_CAP) {
            divergent = true;
            if let Ok(iv) = Interval::new(lo, hi) {
                trace.push(iv);
                radii.push(delta);
            }
            break;
        }
        let iv = Interval::new(lo, hi).expect("finite ordered endpoints");
        if let Some(prev) = trace.last() {
            residuals.push(iv.gh_diff(*prev).map(|d| d.norm()).unwrap_or(f64::INFINITY));
        }
        trace.push(iv);
        radii.push(delta);

        let n = residuals.len();
        if k + 1 >= sched.min_levels && n >= 2 && residuals[n - 1] <= tol && residuals[n - 2] <= tol {
            converged = true;
            break;
        }
        if trace.len() > TREND_STEPS {
            let tail = &trace[trace.len() - TREND_STEPS - 1..];
            let los: Vec<f64> = tail.iter().map(|v| v.lo()).collect();
            let his: Vec<f64> = tail.iter().map(|v| v.hi()).collect();
            if grows(&los) || grows(&his) {
                divergent = true;
                break;
            }
        }
    }

    let Some(&value) = trace.last() else {
        return Ok(None);
    };
    let slack = MONOTONE_SLACK * tol;
    let monotone = match envelope {
        None => true,
        Some(Extremum::Sup) => trace
            .windows(2)
            .all(|w| w[1].lo() <= w[0].lo() + slack && w[1].hi() <= w[0].hi() + slack),
        Some(Extremum::Inf) => trace
            .windows(2)
            .all(|w| w[1].lo() >= w[0].lo() - slack && w[1].hi() >= w[0].hi() - slack),
    };
    let verdict = if divergent {
        Verdict::Divergent
    } else if converged {
        Verdict::Converged
    } else {
        Verdict::Stalled
    };
    Ok(Some(LimitEstimate {
        value,
        level_trace: trace,
        radii,
        converged: converged && !divergent,
        divergent,
        residual: residuals.last().copied().unwrap_or(f64::INFINITY),
        verdict,
        monotone,
        skipped,
    }))
}

fn extremum_over<F: IntervalFn + ?Sized>(
    f: &F,
    region: &[Vec<f64>],
    ext: Extremum,
) -> Result<Interval, LimitError> {
    if region.is_empty() {
        return Err(LimitError::EmptyRegion);
    }
    let acc = region
        .par_iter()
        .map(|x| f.eval(x).map(Acc::one))
        .try_reduce(Acc::empty, |a, b| Ok(a.merge(b)))?;
    let (lo, hi) = acc.endpoints(ext);
    Ok(Interval::new(lo, hi).map_err(EvalError::from)?)
}

/// Componentwise supremum `[sup f̲, sup f̄]` over a finite region.
pub fn sup_over<F: IntervalFn + ?Sized>(f: &F, region: &[Vec<f64>]) -> Result<Interval, LimitError> {
    extremum_over(f, region, Extremum::Sup)
}

/// Componentwise infimum `[inf f̲, inf f̄]` over a finite region.
pub fn inf_over<F: IntervalFn + ?Sized>(f: &F, region: &[Vec<f64>]) -> Result<Interval, LimitError> {
    extremum_over(f, region, Extremum::Inf)
}

fn check_point<F: IntervalFn + ?Sized>(f: &F, xbar: &[f64]) -> Result<(), LimitError> {
    if xbar.len() != f.dims() {
        return Err(LimitError::Dimension {
            want: f.dims(),
            got: xbar.len(),
        });
    }
    Ok(())
}

fn limit_at<F: IntervalFn + ?Sized>(
    f: &F,
    xbar: &[f64],
    sched: &ShrinkSchedule,
    tol: f64,
    ext: Extremum,
) -> Result<LimitEstimate, LimitError> {
    check_point(f, xbar)?;
    sched.validate(xbar)?;
    let exclusion = 1e-15 * (1.0 + norm(xbar));
    let est = shrink(sched, tol, Some(ext), |k, delta| {
        let pts = sampling::ball_points(xbar, delta, sched.samples_per_level, sched.seed, k as u64);
        let acc = pts
            .par_iter()
            .filter(|x| distance(x, xbar) > exclusion && f.admits(x))
            .map(|x| match f.eval(x) {
                Ok(v) => Acc::one(v),
                Err(_) => Acc::skip(),
            })
            .reduce(Acc::empty, Acc::merge);
        if acc.count == 0 {
            return Err(LimitError::BoundaryStarvation {
                level: k,
                radius: delta,
            });
        }
        let (lo, hi) = acc.endpoints(ext);
        Ok(Some(LevelValue {
            lo,
            hi,
            skipped: acc.skipped,
        }))
    })?;
    Ok(est.expect("every level yields a value or an error"))
}

/// Limit superior of `f` at `xbar`: `lim_{δ→0} sup_{x ∈ B(x̄,δ)∖{x̄}} F(x)`,
/// componentwise.
pub fn limsup_at<F: IntervalFn + ?Sized>(
    f: &F,
    xbar: &[f64],
    sched: &ShrinkSchedule,
    tol: f64,
) -> Result<LimitEstimate, LimitError> {
    limit_at(f, xbar, sched, tol, Extremum::Sup)
}

/// Limit inferior of `f` at `xbar`, componentwise.
pub fn liminf_at<F: IntervalFn + ?Sized>(
    f: &F,
    xbar: &[f64],
    sched: &ShrinkSchedule,
    tol: f64,
) -> Result<LimitEstimate, LimitError> {
    limit_at(f, xbar, sched, tol, Extremum::Inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::ivf::{DomainBox, Ivf};

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn sched() -> ShrinkSchedule {
        ShrinkSchedule::default()
    }

    #[test]
    fn sup_and_inf_over_grids() {
        let dom = DomainBox::symmetric(1, 2.0);
        let f = Ivf::scale_form(Expr::var(0), iv(1.0, 2.0), dom.clone()).unwrap();
        let grid = vec![vec![0.0], vec![0.5], vec![1.0]];
        assert_eq!(sup_over(&f, &grid).unwrap(), iv(1.0, 2.0));
        assert_eq!(inf_over(&f, &grid).unwrap(), Interval::ZERO);

        let g = Ivf::bounds(dom.clone(), -Expr::var(0), Expr::var(0).abs()).unwrap();
        let grid = vec![vec![0.0], vec![1.0]];
        assert_eq!(sup_over(&g, &grid).unwrap(), iv(0.0, 1.0));
        let g = Ivf::bounds(dom.clone(), -Expr::var(0), Expr::var(0)).unwrap_err();
        assert!(matches!(g, crate::ivf::IvfError::Validation { .. }));

        let c = Ivf::bounds(dom, Expr::c(-1.0), Expr::c(3.0)).unwrap();
        assert_eq!(sup_over(&c, &[vec![0.3], vec![-1.2]]).unwrap(), iv(-1.0, 3.0));
        assert_eq!(sup_over(&c, &[]).unwrap_err(), LimitError::EmptyRegion);
    }

    #[test]
    fn limsup_of_continuous_function_is_its_value() {
        let f = Ivf::bounds(
            DomainBox::symmetric(2, 3.0),
            Expr::var(0) * Expr::var(1),
            Expr::var(0) * Expr::var(1) + Expr::var(0).exp(),
        )
        .unwrap();
        let x = [0.7, -0.4];
        let v = f.eval(&x).unwrap();
        for est in [
            limsup_at(&f, &x, &sched(), DEFAULT_TOL).unwrap(),
            liminf_at(&f, &x, &sched(), DEFAULT_TOL).unwrap(),
        ] {
            assert!(est.converged);
            assert!(est.monotone);
            assert!(est.value.gh_diff(v).unwrap().norm() <= DEFAULT_TOL);
        }
    }

    #[test]
    fn oscillation_limsup_and_liminf() {
        let s = (1.0 / Expr::var(0)).sin();
        let f = Ivf::bounds(DomainBox::symmetric(1, 1.0), s.clone(), s).unwrap();
        let up = limsup_at(&f, &[0.0], &sched(), DEFAULT_TOL).unwrap();
        assert!(up.converged);
        assert!((up.value.lo() - 1.0).abs() <= DEFAULT_TOL && (up.value.hi() - 1.0).abs() <= DEFAULT_TOL);
        let down = liminf_at(&f, &[0.0], &sched(), DEFAULT_TOL).unwrap();
        assert!((down.value.lo() + 1.0).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn unbounded_endpoints_diverge() {
        let inv = 1.0 / Expr::var(0).abs();
        let f = Ivf::bounds(DomainBox::symmetric(1, 1.0), Expr::c(0.0), inv.clone()).unwrap();
        let est = limsup_at(&f, &[0.0], &sched(), DEFAULT_TOL).unwrap();
        assert!(est.divergent && !est.converged);
        assert_eq!(est.verdict, Verdict::Divergent);

        let g = Ivf::bounds(DomainBox::symmetric(1, 1.0), -inv, Expr::c(0.0)).unwrap();
        let est = liminf_at(&g, &[0.0], &sched(), DEFAULT_TOL).unwrap();
        assert!(est.divergent);
    }

    #[test]
    fn starvation_on_isolated_point() {
        let f = Ivf::bounds(DomainBox::new(vec![(0.0, 1.0)]).unwrap(), Expr::c(0.0), Expr::c(1.0))
            .unwrap();
        let err = limsup_at(&f, &[5.0], &sched(), DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, LimitError::BoundaryStarvation { level: 0, .. }));
    }

    #[test]
    fn schedule_validation() {
        let mut s = sched();
        assert!(s.validate(&[0.0]).is_ok());
        s.ratio = 1.0;
        assert!(s.validate(&[0.0]).is_err());
        s.ratio = 0.1;
        s.max_levels = 400;
        assert!(s.validate(&[0.0]).is_err());
        s.max_levels = 2;
        assert!(s.validate(&[0.0]).is_err());
        s.max_levels = 6;
        assert!(s.validate(&[0.0]).is_err());
        s.min_levels = 3;
        assert!(s.validate(&[0.0]).is_ok());
        assert_eq!(ShrinkSchedule::for_dims(3).samples_per_level, 8192);
        assert_eq!(ShrinkSchedule::for_dims(9).samples_per_level, 65536);
    }

    #[test]
    fn schedule_json_round_trip() {
        let s = sched();
        let text = serde_json::to_string(&s).unwrap();
        let back: ShrinkSchedule = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        let partial: ShrinkSchedule = serde_json::from_str(r#"{"delta0": 0.25}"#).unwrap();
        assert_eq!(partial.delta0, 0.25);
        assert_eq!(partial.max_levels, 20);
    }

    #[test]
    fn growth_trend() {
        assert!(grows(&[-2e3, -4e3, -8e3, -1.6e4]));
        assert!(!grows(&[2.0, 4.0, 8.0, 16.0]));
        assert!(!grows(&[1e4, -2e4, 4e4, 8e4]));
        assert!(!grows(&[1e5, 1.1e5, 1.2e5, 1.3e5]));
    }
}
