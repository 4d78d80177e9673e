//! Sampled verifiers for convexity, gH-continuity, gH-Lipschitz continuity
//! and sublinearity.
//!
//! Every checker is deterministic in `(seed, trials)`. Trials run in
//! parallel; when several fail, the lowest trial index is reported.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::ivf::{DomainBox, EvalError, GapFn, IntervalFn};
use crate::limit::{self, LimitError, ShrinkSchedule};
use crate::sampling::{self, distance};

/// Absolute-plus-relative slack for exact-arithmetic dominance claims.
pub const EXACT_SLACK: f64 = 1e-9;
const CONVEX_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];
const HOMOGENEITY_FACTORS: [f64; 4] = [0.0, 0.5, 2.0, 1.0];
const DRAW_ATTEMPTS: usize = 64;

const NEAR_MIN: f64 = 1e-8;
/// Pair distances in `[1e-8, 1e-4)` feed the log-log slope test.
const SLOPE_DECADES: usize = 4;
const SLOPE_THRESHOLD: f64 = -0.1;
const FACE_DECADES: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("sublinearity needs a domain symmetric about the origin, got {0}")]
    NotSymmetric(DomainBox),
    #[error("region {region} is not inside the domain {domain}")]
    Region { region: DomainBox, domain: DomainBox },
    #[error("counterexample does not match this function: {0}")]
    Replay(String),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<IntervalError> for CheckError {
    fn from(e: IntervalError) -> Self {
        CheckError::Eval(e.into())
    }
}

/// A concrete input on which a property failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `F(λ₁x₁ + λ₂x₂) ⪯ λ₁⊙F(x₁) ⊕ λ₂⊙F(x₂)` fails.
    Convexity {
        x1: Vec<f64>,
        x2: Vec<f64>,
        lambda1: f64,
        left: Interval,
        right: Interval,
    },
    /// `‖F(point) ⊖gH F(x̄)‖` stays above `tol` arbitrarily close to `x̄`.
    Continuity {
        xbar: Vec<f64>,
        point: Vec<f64>,
        gap: f64,
        tol: f64,
    },
    /// `F(λx)` and `λ⊙F(x)` differ by more than `tol`.
    Homogeneity {
        x: Vec<f64>,
        lambda: f64,
        left: Interval,
        right: Interval,
        tol: f64,
    },
    /// `F(x) ⊕ F(y)`, widened by `slack`, strictly dominates `F(x+y)`.
    Subadditivity {
        x: Vec<f64>,
        y: Vec<f64>,
        left: Interval,
        right: Interval,
        slack: f64,
    },
}

fn convex_violation(left: Interval, right: Interval) -> bool {
    let slack = EXACT_SLACK * (1.0 + right.norm());
    !left.precedes_within(&right, slack)
}

fn homogeneity_gap(left: Interval, right: Interval) -> f64 {
    left.gh_diff(right).map(|d| d.norm()).unwrap_or(f64::INFINITY)
}

/// `(R ⊕ [−s, s]) ≺ L`, i.e. the `F(x+y) ⊁ F(x) ⊕ F(y)` condition fails.
pub(crate) fn subadditive_violation(left: Interval, right: Interval, slack: f64) -> bool {
    let lo = right.lo() - slack;
    let hi = right.hi() + slack;
    lo <= left.lo() && hi <= left.hi() && (lo < left.lo() || hi < left.hi())
}

fn scaled(x: &[f64], a: f64) -> Vec<f64> {
    x.iter().map(|v| v * a).collect()
}

fn combine(x1: &[f64], x2: &[f64], l1: f64) -> Vec<f64> {
    x1.iter().zip(x2).map(|(a, b)| l1 * a + (1.0 - l1) * b).collect()
}

fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

impl Counterexample {
    /// Re-evaluates the recorded inputs on `f`; `true` when the violation
    /// reproduces.
    pub fn replay<F: IntervalFn + ?Sized>(&self, f: &F) -> Result<bool, CheckError> {
        let dims = f.dims();
        let fits = |x: &[f64]| {
            if x.len() == dims {
                Ok(())
            } else {
                Err(CheckError::Replay(format!("point {x:?} has the wrong dimension")))
            }
        };
        match self {
            Counterexample::Convexity { x1, x2, lambda1, .. } => {
                fits(x1)?;
                fits(x2)?;
                let left = f.eval(&combine(x1, x2, *lambda1))?;
                let a = f.eval(x1)?.scalar_mul(*lambda1)?;
                let right = a.add(f.eval(x2)?.scalar_mul(1.0 - lambda1)?)?;
                Ok(convex_violation(left, right))
            }
            Counterexample::Continuity { xbar, point, tol, .. } => {
                fits(xbar)?;
                fits(point)?;
                let gap = f.eval(point)?.gh_diff(f.eval(xbar)?)?.norm();
                Ok(gap > *tol)
            }
            Counterexample::Homogeneity { x, lambda, tol, .. } => {
                fits(x)?;
                let left = f.eval(&scaled(x, *lambda))?;
                let right = f.eval(x)?.scalar_mul(*lambda)?;
                Ok(homogeneity_gap(left, right) > *tol)
            }
            Counterexample::Subadditivity { x, y, slack, .. } => {
                fits(x)?;
                fits(y)?;
                let left = f.eval(&add(x, y))?;
                let right = f.eval(x)?.add(f.eval(y)?)?;
                Ok(subadditive_violation(left, right, *slack))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub trials: usize,
    /// For sublinearity: whether the stronger `F(x+y) ⪯ F(x) ⊕ F(y)` form
    /// also held on every sampled pair.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stronger_form: Option<bool>,
}

impl CheckVerdict {
    fn from_search(counterexample: Option<Counterexample>, trials: usize) -> CheckVerdict {
        CheckVerdict {
            holds: counterexample.is_none(),
            counterexample,
            trials,
            stronger_form: None,
        }
    }
}

fn draw_admitted<F: IntervalFn + ?Sized, R: Rng>(f: &F, region: &DomainBox, rng: &mut R) -> Option<Vec<f64>> {
    (0..DRAW_ATTEMPTS)
        .map(|_| region.sample_uniform(rng))
        .find(|x| f.admits(x))
}

/// Samples `(x₁, x₂)` pairs and tests `F(λ₁x₁ + λ₂x₂) ⪯ λ₁⊙F(x₁) ⊕ λ₂⊙F(x₂)`
/// for `λ₁ ∈ {0.25, 0.5, 0.75}` and one random weight per pair.
pub fn check_convex<F: IntervalFn + ?Sized>(f: &F, trials: usize, seed: u64) -> CheckVerdict {
    let found = (0..trials).into_par_iter().find_map_first(|t| {
        let mut rng = sampling::stream_rng(seed, t as u64);
        let x1 = draw_admitted(f, f.domain(), &mut rng)?;
        let x2 = draw_admitted(f, f.domain(), &mut rng)?;
        let (f1, f2) = (f.eval(&x1).ok()?, f.eval(&x2).ok()?);
        let random: f64 = rng.random();
        CONVEX_WEIGHTS.iter().copied().chain([random]).find_map(|l1| {
            let z = combine(&x1, &x2, l1);
            if !f.admits(&z) {
                return None;
            }
            let left = f.eval(&z).ok()?;
            let right = f1.scalar_mul(l1).ok()?.add(f2.scalar_mul(1.0 - l1).ok()?).ok()?;
            convex_violation(left, right).then(|| Counterexample::Convexity {
                x1: x1.clone(),
                x2: x2.clone(),
                lambda1: l1,
                left,
                right,
            })
        })
    });
    CheckVerdict::from_search(found, trials)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// Largest sampled `‖F(x) ⊖gH F(y)‖ / ‖x − y‖`.
    pub k_estimate: f64,
    pub witness_pair: Option<(Vec<f64>, Vec<f64>)>,
    pub is_lipschitz_likely: bool,
    pub samples: usize,
    /// Fitted slope of log(max ratio) against log(distance) over the near
    /// decades; a clearly negative slope means the ratio blows up.
    pub slope: f64,
}

struct PairRatio {
    ratio: f64,
    dist: f64,
    index: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn near_face_point<R: Rng>(region: &DomainBox, rng: &mut R) -> Vec<f64> {
    let mut x = region.sample_uniform(rng);
    let d = rng.random_range(0..region.dims());
    let (lo, hi) = region.bounds()[d];
    let off = (hi - lo) * 10f64.powf(-FACE_DECADES * rng.random::<f64>());
    x[d] = if rng.random::<bool>() { lo + off } else { hi - off };
    x[d] = x[d].clamp(lo, hi);
    x
}

fn lipschitz_pair<F: IntervalFn + ?Sized>(
    f: &F,
    region: &DomainBox,
    seed: u64,
    t: usize,
) -> Option<PairRatio> {
    let mut rng = sampling::stream_rng(seed, t as u64);
    let n = region.dims();
    let diam = region.diameter();
    let (x, y) = match t % 3 {
        0 => (region.sample_uniform(&mut rng), region.sample_uniform(&mut rng)),
        kind => {
            let x = if kind == 1 {
                region.sample_uniform(&mut rng)
            } else {
                near_face_point(region, &mut rng)
            };
            let dist = NEAR_MIN * (diam / NEAR_MIN).powf(rng.random::<f64>());
            let u = sampling::unit_direction(n, &mut rng);
            let forward: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + dist * b).collect();
            let y = if region.contains(&forward) {
                forward
            } else {
                let back: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a - dist * b).collect();
                if region.contains(&back) {
                    back
                } else {
                    back.iter()
                        .zip(region.bounds())
                        .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
                        .collect()
                }
            };
            (x, y)
        }
    };
    if !(f.admits(&x) && f.admits(&y)) {
        return None;
    }
    let dist = distance(&x, &y);
    if dist <= 0.0 {
        return None;
    }
    let (fx, fy) = (f.eval(&x).ok()?, f.eval(&y).ok()?);
    let gap = fx.gh_diff(fy).ok()?.norm();
    // differences at the rounding level of the values carry no slope information
    let noise = 64.0 * f64::EPSILON * (fx.norm() + fy.norm());
    let ratio = (gap - noise).max(0.0) / dist;
    Some(PairRatio { ratio, dist, index: t, x, y })
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Estimates a gH-Lipschitz constant on `region` from sampled pairs, a third
/// of them far apart and the rest at distances log-uniform down to 1e-8 (half
/// of those based near a face). The function is flagged as not Lipschitz when
/// the per-decade maximum ratio over `[1e-8, 1e-4)` grows with slope below
/// −0.1 in log-log scale.
pub fn check_lipschitz<F: IntervalFn + ?Sized>(
    f: &F,
    region: &DomainBox,
    trials: usize,
    seed: u64,
) -> Result<LipschitzReport, CheckError> {
    let inside = region.dims() == f.dims()
        && region
            .bounds()
            .iter()
            .zip(f.domain().bounds())
            .all(|(r, d)| d.0 <= r.0 && r.1 <= d.1);
    if !inside {
        return Err(CheckError::Region {
            region: region.clone(),
            domain: f.domain().clone(),
        });
    }

    let pairs: Vec<PairRatio> = (0..trials)
        .into_par_iter()
        .filter_map(|t| lipschitz_pair(f, region, seed, t))
        .collect();

    let best = pairs.iter().fold(None::<&PairRatio>, |best, p| match best {
        Some(b) if b.ratio >= p.ratio => Some(b),
        _ => Some(p),
    });
    let mut decade_max = [0.0f64; SLOPE_DECADES];
    for p in &pairs {
        let decade = (p.dist / NEAR_MIN).log10().floor();
        if decade >= 0.0 && (decade as usize) < SLOPE_DECADES {
            let i = decade as usize;
            decade_max[i] = decade_max[i].max(p.ratio);
        }
    }
    let points: Vec<(f64, f64)> = decade_max
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > 0.0)
        .map(|(i, m)| ((NEAR_MIN.log10() + i as f64 + 0.5), m.log10()))
        .collect();
    let slope = fit_slope(&points);
    debug_assert!(pairs.windows(2).all(|w| w[0].index < w[1].index));

    Ok(LipschitzReport {
        k_estimate: best.map_or(0.0, |p| p.ratio),
        witness_pair: best.filter(|p| p.ratio > 0.0).map(|p| (p.x.clone(), p.y.clone())),
        is_lipschitz_likely: slope >= SLOPE_THRESHOLD,
        samples: pairs.len(),
        slope,
    })
}

/// gH-continuity at `xbar` with the default schedule for the dimension.
pub fn check_gh_continuous<F: IntervalFn + ?Sized>(
    f: &F,
    xbar: &[f64],
    tol: f64,
) -> Result<CheckVerdict, CheckError> {
    check_gh_continuous_with(f, xbar, tol, &ShrinkSchedule::for_dims(f.dims()))
}

/// Estimates `limsup_{x→x̄} ‖F(x) ⊖gH F(x̄)‖` (at a tenth of `tol`) and
/// declares continuity when it is finite and at most `tol`.
pub fn check_gh_continuous_with<F: IntervalFn + ?Sized>(
    f: &F,
    xbar: &[f64],
    tol: f64,
    sched: &ShrinkSchedule,
) -> Result<CheckVerdict, CheckError> {
    let anchor = f.eval(xbar)?;
    let gap = GapFn { f, anchor };
    let est = limit::limsup_at(&gap, xbar, sched, tol / 10.0)?;
    let trials = est.levels() * sched.samples_per_level;
    if !est.divergent && est.value.hi() <= tol {
        return Ok(CheckVerdict::from_search(None, trials));
    }

    // witness: worst admissible sample on the last level, lowest index on ties
    let level = est.levels() - 1;
    let radius = est.radii[level];
    let pts = sampling::ball_points(xbar, radius, sched.samples_per_level, sched.seed, level as u64);
    let worst = pts
        .iter()
        .filter(|x| distance(x, xbar) > 0.0 && gap.admits(x))
        .filter_map(|x| gap.eval(x).ok().map(|g| (g.hi(), x)))
        .fold(None::<(f64, &Vec<f64>)>, |acc, (g, x)| match acc {
            Some((best, _)) if best >= g => acc,
            _ => Some((g, x)),
        });
    let counterexample = worst.filter(|(g, _)| *g > tol).map(|(g, x)| Counterexample::Continuity {
        xbar: xbar.to_vec(),
        point: x.clone(),
        gap: g,
        tol,
    });
    Ok(CheckVerdict {
        holds: false,
        counterexample,
        trials,
        stronger_form: None,
    })
}

/// Positive homogeneity `F(λx) = λ⊙F(x)` (within `tol`) and the
/// subadditivity condition `F(x+y) ⊁ F(x) ⊕ F(y)` (right side widened by
/// `tol`) on an origin-symmetric box. Points are drawn from shrunken copies of
/// the box so that `λx` and `x+y` stay inside.
pub fn check_sublinear<F: IntervalFn + ?Sized>(
    f: &F,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckVerdict, CheckError> {
    let domain = f.domain();
    if !domain.is_symmetric() {
        return Err(CheckError::NotSymmetric(domain.clone()));
    }
    let shrunk = |a: f64| -> DomainBox {
        DomainBox::new(domain.bounds().iter().map(|(lo, hi)| (lo * a, hi * a)).collect())
            .expect("scaled symmetric box")
    };
    let half = shrunk(0.5);

    let results: Vec<(Option<Counterexample>, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::stream_rng(seed, t as u64);
            let lambda = match HOMOGENEITY_FACTORS.get(t % 5) {
                Some(l) => *l,
                None => rng.random_range(0.0..4.0),
            };
            let region = if lambda > 1.0 { shrunk(1.0 / lambda) } else { domain.clone() };
            if let Some(x) = draw_admitted(f, &region, &mut rng) {
                let lx = scaled(&x, lambda);
                if f.admits(&lx) {
                    if let (Ok(left), Ok(fx)) = (f.eval(&lx), f.eval(&x)) {
                        if let Ok(right) = fx.scalar_mul(lambda) {
                            if homogeneity_gap(left, right) > tol {
                                let c = Counterexample::Homogeneity { x, lambda, left, right, tol };
                                return (Some(c), true);
                            }
                        }
                    }
                }
            }

            let (Some(x), Some(y)) = (draw_admitted(f, &half, &mut rng), draw_admitted(f, &half, &mut rng))
            else {
                return (None, true);
            };
            let s = add(&x, &y);
            if !f.admits(&s) {
                return (None, true);
            }
            let (Ok(left), Ok(fx), Ok(fy)) = (f.eval(&s), f.eval(&x), f.eval(&y)) else {
                return (None, true);
            };
            let Ok(right) = fx.add(fy) else {
                return (None, true);
            };
            let stronger = left.precedes_within(&right, tol);
            if subadditive_violation(left, right, tol) {
                let c = Counterexample::Subadditivity { x, y, left, right, slack: tol };
                return (Some(c), stronger);
            }
            (None, stronger)
        })
        .collect();

    let stronger = results.iter().all(|r| r.1);
    let counterexample = results.into_iter().find_map(|r| r.0);
    Ok(CheckVerdict {
        holds: counterexample.is_none(),
        counterexample,
        trials,
        stronger_form: Some(stronger),
    })
}
