//! Closed bounded intervals with Moore arithmetic, the gH-difference,
//! the dominance partial order and the max-abs norm.
//!
//! Endpoints are plain `f64` with round-to-nearest arithmetic. Every
//! constructor rejects NaN, infinities and inverted bounds, and normalizes
//! `-0.0` to `+0.0` so that equal intervals compare equal bit-for-bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: f64, hi: f64 },
    #[error("non-finite endpoint in [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
    #[error("arithmetic overflow in {op}")]
    Overflow { op: &'static str },
    #[error("divisor [{lo}, {hi}] contains zero")]
    ZeroInDivisor { lo: f64, hi: f64 },
    #[error("cannot parse interval from {0:?}")]
    Parse(String),
}

/// An element `[lo, hi]` of the space of closed bounded real intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Wire form `{"lo": a, "hi": b}`.
#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: f64,
    hi: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi)
    }
}

impl From<Interval> for RawInterval {
    fn from(iv: Interval) -> Self {
        RawInterval { lo: iv.lo, hi: iv.hi }
    }
}

/// Relation of the left interval toward the right one.
///
/// `Dominates` means the left interval is `⪯` the right one ("the right is
/// dominated by the left"). [`Interval::dominance`] reports the strongest
/// relation, so a nonstrict-but-unequal pair always comes back as the
/// strict variant; the nonstrict variants are only produced by callers that
/// build a verdict from [`Interval::precedes`] alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dominance {
    Equal,
    StrictlyDominates,
    Dominates,
    StrictlyDominatedBy,
    DominatedBy,
    Incomparable,
}

impl Dominance {
    /// True for `Equal`, `StrictlyDominates` and `Dominates`.
    pub fn left_precedes(self) -> bool {
        matches!(
            self,
            Dominance::Equal | Dominance::StrictlyDominates | Dominance::Dominates
        )
    }

    /// True for `Equal`, `StrictlyDominatedBy` and `DominatedBy`.
    pub fn right_precedes(self) -> bool {
        matches!(
            self,
            Dominance::Equal | Dominance::StrictlyDominatedBy | Dominance::DominatedBy
        )
    }

    pub fn reversed(self) -> Dominance {
        match self {
            Dominance::Equal => Dominance::Equal,
            Dominance::StrictlyDominates => Dominance::StrictlyDominatedBy,
            Dominance::Dominates => Dominance::DominatedBy,
            Dominance::StrictlyDominatedBy => Dominance::StrictlyDominates,
            Dominance::DominatedBy => Dominance::Dominates,
            Dominance::Incomparable => Dominance::Incomparable,
        }
    }
}

#[inline]
fn unsign_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v[0].min(v[1]).min(v[2].min(v[3]))
}

fn max4(v: [f64; 4]) -> f64 {
    v[0].max(v[1]).max(v[2].max(v[3]))
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Interval, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Interval {
            lo: unsign_zero(lo),
            hi: unsign_zero(hi),
        })
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Result<Interval, IntervalError> {
        Interval::new(v, v)
    }

    /// Builds an interval from endpoints computed by an arithmetic rule,
    /// mapping non-finite results to an overflow error.
    fn from_op(lo: f64, hi: f64, op: &'static str) -> Result<Interval, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Overflow { op });
        }
        debug_assert!(lo <= hi, "{op} produced [{lo}, {hi}]");
        Ok(Interval {
            lo: unsign_zero(lo),
            hi: unsign_zero(hi),
        })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Interval) -> Result<Interval, IntervalError> {
        Interval::from_op(self.lo + rhs.lo, self.hi + rhs.hi, "add")
    }

    /// Moore subtraction `[a̲ − b̄, ā − b̲]`; note `A ⊖ A ≠ 0` unless `A` is degenerate.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Interval) -> Result<Interval, IntervalError> {
        Interval::from_op(self.lo - rhs.hi, self.hi - rhs.lo, "sub")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Interval) -> Result<Interval, IntervalError> {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval::from_op(min4(p), max4(p), "mul")
    }

    /// `λ ⊙ A`. Agrees bit-for-bit with `Interval::point(λ)?.mul(A)`.
    pub fn scalar_mul(self, lambda: f64) -> Result<Interval, IntervalError> {
        if !lambda.is_finite() {
            return Err(IntervalError::NonFinite {
                lo: lambda,
                hi: lambda,
            });
        }
        if lambda >= 0.0 {
            Interval::from_op(lambda * self.lo, lambda * self.hi, "scalar_mul")
        } else {
            Interval::from_op(lambda * self.hi, lambda * self.lo, "scalar_mul")
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && 0.0 <= rhs.hi {
            return Err(IntervalError::ZeroInDivisor {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Interval::from_op(min4(q), max4(q), "div")
    }

    /// `(−1) ⊙ A`; never overflows.
    pub fn neg(self) -> Interval {
        Interval {
            lo: unsign_zero(-self.hi),
            hi: unsign_zero(-self.lo),
        }
    }

    /// The generalized Hukuhara difference `A ⊖_gH B`.
    pub fn gh_diff(self, rhs: Interval) -> Result<Interval, IntervalError> {
        let dl = self.lo - rhs.lo;
        let du = self.hi - rhs.hi;
        Interval::from_op(dl.min(du), dl.max(du), "gh_diff")
    }

    /// `max(|a̲|, |ā|)`.
    pub fn norm(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `self ⪯ other`: both endpoints of `self` are no larger.
    pub fn precedes(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// `self ≺ other`: `self ⪯ other` with at least one strict inequality.
    pub fn strictly_precedes(&self, other: &Interval) -> bool {
        self.precedes(other) && (self.lo < other.lo || self.hi < other.hi)
    }

    /// `self ⪯ other` up to an absolute slack on each endpoint.
    pub fn precedes_within(&self, other: &Interval, eps: f64) -> bool {
        self.lo <= other.lo + eps && self.hi <= other.hi + eps
    }

    /// `[lo − eps, hi + eps]`.
    pub fn inflate(self, eps: f64) -> Result<Interval, IntervalError> {
        Interval::from_op(self.lo - eps, self.hi + eps, "inflate")
    }

    pub fn dominance(&self, other: &Interval) -> Dominance {
        if self.lo == other.lo && self.hi == other.hi {
            Dominance::Equal
        } else if self.precedes(other) {
            Dominance::StrictlyDominates
        } else if other.precedes(self) {
            Dominance::StrictlyDominatedBy
        } else {
            Dominance::Incomparable
        }
    }

    /// Componentwise maximum: `[max(a̲, b̲), max(ā, b̄)]`.
    pub fn sup(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Componentwise minimum: `[min(a̲, b̲), min(ā, b̄)]`.
    pub fn inf(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

impl FromStr for Interval {
    type Err = IntervalError;

    /// Parses `[a,b]` with decimal or scientific-notation endpoints.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IntervalError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo: f64 = a.trim().parse().map_err(|_| bad())?;
        let hi: f64 = b.trim().parse().map_err(|_| bad())?;
        Interval::new(lo, hi)
    }
}

/// Formats a real with 9 significant digits, dropping trailing zeros.
pub fn format_sig9(v: f64) -> String {
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    format!("{}", unsign_zero(rounded))
}

impl Interval {
    /// Text rendering `[lo, hi]` with 9 significant digits per endpoint.
    pub fn to_text(&self) -> String {
        format!("[{}, {}]", format_sig9(self.lo), format_sig9(self.hi))
    }
}
