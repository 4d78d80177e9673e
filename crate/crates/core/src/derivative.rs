//! gH-directional and gH-Clarke derivative estimation.
//!
//! Everything is built on the gH difference quotient
//! `(1/λ) ⊙ (F(x + λh) ⊖gH F(x))`. The directional derivative takes its
//! one-sided limit at `x = x̄`; the upper (lower) Clarke derivative takes the
//! componentwise limsup (liminf) jointly over `x → x̄` and `λ → 0+`, with one
//! shrink parameter δ bounding both `‖x − x̄‖` and `λ`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::ivf::{EvalError, IntervalFn, Ivf};
use crate::limit::{self, Acc, Extremum, LevelValue, LimitError, LimitEstimate, ShrinkSchedule, Verdict};
use crate::sampling;

/// Smallest λ on a level's grid, relative to the level radius.
const LAMBDA_SPAN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DerivError {
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("direction has {got} coordinates, domain has {want}")]
    Direction { want: usize, got: usize },
    #[error("direction must be finite")]
    NonFiniteDirection,
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("the {} does not exist here", .0.describe())]
    Nonexistent(DerivativeKind),
}

impl From<EvalError> for DerivError {
    fn from(e: EvalError) -> Self {
        DerivError::Limit(LimitError::Eval(e))
    }
}

impl From<IntervalError> for DerivError {
    fn from(e: IntervalError) -> Self {
        EvalError::from(e).into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeKind {
    Directional,
    UpperClarke,
    LowerClarke,
}

impl DerivativeKind {
    pub fn describe(self) -> &'static str {
        match self {
            DerivativeKind::Directional => "gH-directional derivative",
            DerivativeKind::UpperClarke => "upper gH-Clarke derivative",
            DerivativeKind::LowerClarke => "lower gH-Clarke derivative",
        }
    }
}

/// Point, direction and estimator settings for one derivative evaluation.
#[derive(Clone, Debug)]
pub struct DerivativeQuery<'a, F: ?Sized = Ivf> {
    pub f: &'a F,
    pub xbar: Vec<f64>,
    pub h: Vec<f64>,
    pub sched: ShrinkSchedule,
    pub tol: f64,
}

impl<'a, F: IntervalFn + ?Sized> DerivativeQuery<'a, F> {
    /// A query with the default schedule for the domain's dimension and the
    /// default tolerance.
    pub fn new(f: &'a F, xbar: &[f64], h: &[f64]) -> Self {
        DerivativeQuery {
            f,
            xbar: xbar.to_vec(),
            h: h.to_vec(),
            sched: ShrinkSchedule::for_dims(f.dims()),
            tol: limit::DEFAULT_TOL,
        }
    }

    pub fn with_schedule(mut self, sched: ShrinkSchedule) -> Self {
        self.sched = sched;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_direction(&self, h: &[f64]) -> Self {
        DerivativeQuery {
            f: self.f,
            xbar: self.xbar.clone(),
            h: h.to_vec(),
            sched: self.sched.clone(),
            tol: self.tol,
        }
    }

    fn check(&self) -> Result<(), DerivError> {
        let want = self.f.dims();
        if self.xbar.len() != want {
            return Err(LimitError::Dimension {
                want,
                got: self.xbar.len(),
            }
            .into());
        }
        if self.h.len() != want {
            return Err(DerivError::Direction {
                want,
                got: self.h.len(),
            });
        }
        if self.h.iter().any(|c| !c.is_finite()) {
            return Err(DerivError::NonFiniteDirection);
        }
        self.sched.validate(&self.xbar)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeResult {
    pub value: Interval,
    pub kind: DerivativeKind,
    pub estimate: LimitEstimate,
    /// False when the estimate diverged or never met the tolerance.
    pub exists: bool,
    /// Whether `x̄` itself was part of the Clarke sample set.
    pub center_included: bool,
}

impl Serialize for DerivativeResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Report<'r> {
            kind: DerivativeKind,
            exists: bool,
            value: &'r Interval,
            residual: Option<f64>,
            levels: usize,
            verdict: Verdict,
        }
        Report {
            kind: self.kind,
            exists: self.exists,
            value: &self.value,
            residual: self.estimate.residual.is_finite().then_some(self.estimate.residual),
            levels: self.estimate.levels(),
            verdict: self.estimate.verdict,
        }
        .serialize(s)
    }
}

fn trivial(kind: DerivativeKind) -> DerivativeResult {
    DerivativeResult {
        value: Interval::ZERO,
        kind,
        estimate: LimitEstimate {
            value: Interval::ZERO,
            level_trace: vec![Interval::ZERO],
            radii: vec![0.0],
            converged: true,
            divergent: false,
            residual: 0.0,
            verdict: Verdict::Converged,
            monotone: true,
            skipped: 0,
        },
        exists: true,
        center_included: false,
    }
}

fn offset(x: &[f64], h: &[f64], lambda: f64) -> Vec<f64> {
    x.iter().zip(h).map(|(a, b)| a + lambda * b).collect()
}

/// `(1/λ) ⊙ (F(x + λh) ⊖gH F(x))`.
pub fn diff_quotient<F: IntervalFn + ?Sized>(
    f: &F,
    x: &[f64],
    h: &[f64],
    lambda: f64,
) -> Result<Interval, DerivError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(DerivError::Step(lambda));
    }
    let fx = f.eval(x)?;
    let fy = f.eval(&offset(x, h, lambda))?;
    Ok(fy.gh_diff(fx)?.scalar_mul(1.0 / lambda)?)
}

fn quotient_from<F: IntervalFn + ?Sized>(f: &F, fx: Interval, y: &[f64], lambda: f64) -> Option<Interval> {
    let fy = f.eval(y).ok()?;
    fy.gh_diff(fx).and_then(|d| d.scalar_mul(1.0 / lambda)).ok()
}

/// Three-point Richardson extrapolation on a geometric step sequence,
/// assuming `q(λ) = D + aλ + bλ² + …`.
fn richardson(q: [f64; 3], r: f64) -> f64 {
    let r1a = (q[1] - r * q[0]) / (1.0 - r);
    let r1b = (q[2] - r * q[1]) / (1.0 - r);
    (r1b - r * r * r1a) / (1.0 - r * r)
}

/// gH-directional derivative `lim_{λ→0+} (1/λ) ⊙ (F(x̄ + λh) ⊖gH F(x̄))`,
/// sampled on `λₖ = δ₀·ratioᵏ` and sharpened by Richardson extrapolation
/// once converged. Levels whose step leaves the domain are skipped.
pub fn directional<F: IntervalFn + ?Sized>(q: &DerivativeQuery<'_, F>) -> Result<DerivativeResult, DerivError> {
    q.check()?;
    let f = q.f;
    let fx = f.eval(&q.xbar)?;
    if q.h.iter().all(|c| *c == 0.0) {
        return Ok(trivial(DerivativeKind::Directional));
    }
    let est = limit::shrink(&q.sched, q.tol, None, |_, lambda| {
        let y = offset(&q.xbar, &q.h, lambda);
        if !f.admits(&y) {
            return Ok(None);
        }
        Ok(quotient_from(f, fx, &y, lambda).map(|v| LevelValue {
            lo: v.lo(),
            hi: v.hi(),
            skipped: 0,
        }))
    })?;
    let Some(est) = est else {
        return Err(LimitError::BoundaryStarvation {
            level: q.sched.max_levels,
            radius: q.sched.delta(q.sched.max_levels - 1),
        }
        .into());
    };

    let mut value = est.value;
    let n = est.levels();
    let r = q.sched.ratio;
    if est.converged && n >= 3 {
        let radii = &est.radii[n - 3..];
        let consecutive = radii.windows(2).all(|w| (w[1] / w[0] - r).abs() <= 1e-12);
        if consecutive {
            let tail = &est.level_trace[n - 3..];
            let lo = richardson([tail[0].lo(), tail[1].lo(), tail[2].lo()], r);
            let hi = richardson([tail[0].hi(), tail[1].hi(), tail[2].hi()], r);
            let bound = 2.0 * est.residual * (r / (1.0 - r)).max(1.0) + q.tol;
            let moved = (lo - value.lo()).abs().max((hi - value.hi()).abs());
            if lo.is_finite() && hi.is_finite() && moved <= bound {
                value = Interval::new(lo.min(hi), lo.max(hi))?;
            }
        }
    }
    let exists = est.converged;
    Ok(DerivativeResult {
        value,
        kind: DerivativeKind::Directional,
        estimate: est,
        exists,
        center_included: false,
    })
}

fn clarke<F: IntervalFn + ?Sized>(
    q: &DerivativeQuery<'_, F>,
    ext: Extremum,
) -> Result<DerivativeResult, DerivError> {
    q.check()?;
    let kind = match ext {
        Extremum::Sup => DerivativeKind::UpperClarke,
        Extremum::Inf => DerivativeKind::LowerClarke,
    };
    if q.h.iter().all(|c| *c == 0.0) {
        return Ok(trivial(kind));
    }
    let f = q.f;
    let center_included = f.admits(&q.xbar) && f.eval(&q.xbar).is_ok();
    let m = q.sched.lambda_samples;
    let est = limit::shrink(&q.sched, q.tol, Some(ext), |k, delta| {
        let lambdas: Vec<f64> = (0..m)
            .map(|j| delta * LAMBDA_SPAN.powf((j + 1) as f64 / m as f64))
            .collect();
        let mut xs = sampling::ball_points(&q.xbar, delta, q.sched.samples_per_level, q.sched.seed, k as u64);
        if center_included {
            xs.push(q.xbar.clone());
        }
        let acc = xs
            .par_iter()
            .filter(|x| f.admits(x))
            .map(|x| {
                let Ok(fx) = f.eval(x) else {
                    return Acc::skip();
                };
                let mut acc = Acc::empty();
                for &lambda in &lambdas {
                    let y = offset(x, &q.h, lambda);
                    if !f.admits(&y) {
                        continue;
                    }
                    acc = match quotient_from(f, fx, &y, lambda) {
                        Some(v) => acc.merge(Acc::one(v)),
                        None => acc.merge(Acc::skip()),
                    };
                }
                acc
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
    let est = est.expect("every level yields a value or an error");
    Ok(DerivativeResult {
        value: est.value,
        kind,
        exists: est.converged,
        estimate: est,
        center_included,
    })
}

/// Upper gH-Clarke derivative
/// `limsup_{x→x̄, λ→0+} (1/λ) ⊙ (F(x + λh) ⊖gH F(x))`.
pub fn upper_clarke<F: IntervalFn + ?Sized>(q: &DerivativeQuery<'_, F>) -> Result<DerivativeResult, DerivError> {
    clarke(q, Extremum::Sup)
}

/// Lower gH-Clarke derivative, the liminf counterpart of [`upper_clarke`].
pub fn lower_clarke<F: IntervalFn + ?Sized>(q: &DerivativeQuery<'_, F>) -> Result<DerivativeResult, DerivError> {
    clarke(q, Extremum::Inf)
}

/// `F_C(x̄)(h) ⊖gH F_D(x̄)(h)`; near zero where the two derivatives coincide.
pub fn clarke_directional_gap<F: IntervalFn + ?Sized>(q: &DerivativeQuery<'_, F>) -> Result<Interval, DerivError> {
    let d = directional(q)?;
    if !d.exists {
        return Err(DerivError::Nonexistent(DerivativeKind::Directional));
    }
    let c = upper_clarke(q)?;
    if !c.exists {
        return Err(DerivError::Nonexistent(DerivativeKind::UpperClarke));
    }
    Ok(c.value.gh_diff(d.value)?)
}
