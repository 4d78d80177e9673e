//! Generalized-Hukuhara interval calculus.
//!
//! Interval arithmetic with the gH-difference and dominance order,
//! interval-valued functions over boxes, numerical limsup/liminf estimation,
//! gH-directional and gH-Clarke derivative estimation, and sampled checks for
//! convexity, gH-continuity, gH-Lipschitz continuity and sublinearity.

pub mod checks;
pub mod derivative;
pub mod expr;
pub mod family;
pub mod interval;
pub mod ivf;
pub mod limit;
pub mod parse;
pub mod sampling;
pub mod suites;

pub use checks::{
    check_convex, check_gh_continuous, check_lipschitz, check_sublinear, CheckError, CheckVerdict,
    Counterexample, LipschitzReport,
};
pub use derivative::{
    clarke_directional_gap, diff_quotient, directional, lower_clarke, upper_clarke, DerivError,
    DerivativeKind, DerivativeQuery, DerivativeResult,
};
pub use family::{family_member, generator_family, Family, FamilyKind};
pub use expr::{CmpOp, Expr, Func, Predicate};
pub use interval::{Dominance, Interval, IntervalError};
pub use ivf::{DomainBox, EvalError, Form, IntervalFn, Ivf, IvfError};
pub use limit::{LimitEstimate, ScheduleOverrides, ShrinkSchedule, Verdict};
pub use parse::parse_ivf;
