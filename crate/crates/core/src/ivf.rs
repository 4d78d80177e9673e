//! Interval-valued functions `F(x) = [f̲(x), f̄(x)]` over boxes in ℝⁿ.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Expr, Predicate};
use crate::interval::{Interval, IntervalError};

/// Seed of the pseudorandom half of construction-time validation.
pub const VALIDATION_SEED: u64 = 0x5EED;
const VALIDATION_GRID: usize = 17;
const VALIDATION_GRID_CAP: usize = 100_000;
const VALIDATION_RANDOM: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("point {point:?} lies outside the domain")]
    Domain { point: Vec<f64> },
    #[error("point has {got} coordinates, domain has {want}")]
    Dimension { want: usize, got: usize },
    #[error("non-finite value at {point:?}")]
    NonFinite { point: Vec<f64> },
    #[error("lower endpoint {lower} exceeds upper endpoint {upper} at {point:?}")]
    Inverted {
        point: Vec<f64>,
        lower: f64,
        upper: f64,
    },
    #[error(transparent)]
    Arithmetic(#[from] IntervalError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IvfError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {name} takes {expected} argument(s), found {found}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: String,
        found: usize,
    },
    #[error("expression uses {used} variable(s) but the domain has {dims}")]
    Variables { used: usize, dims: usize },
    #[error("empty or inverted domain bound [{lo}, {hi}] in dimension {dim}")]
    Domain { dim: usize, lo: f64, hi: f64 },
    #[error("lower endpoint {lower} exceeds upper endpoint {upper} at {point:?}")]
    Validation {
        point: Vec<f64>,
        lower: f64,
        upper: f64,
    },
}

/// A closed box `∏ [lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    bounds: Vec<(f64, f64)>,
}

impl DomainBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<DomainBox, IvfError> {
        if bounds.is_empty() {
            return Err(IvfError::Domain {
                dim: 0,
                lo: f64::NAN,
                hi: f64::NAN,
            });
        }
        for (dim, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(IvfError::Domain { dim, lo, hi });
            }
        }
        Ok(DomainBox { bounds })
    }

    /// `[-r, r]ⁿ`.
    pub fn symmetric(n: usize, r: f64) -> DomainBox {
        DomainBox::new(vec![(-r, r); n]).expect("finite symmetric box")
    }

    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Inclusive membership test.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.bounds.len()
            && x
                .iter()
                .zip(&self.bounds)
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn is_symmetric(&self) -> bool {
        self.bounds.iter().all(|(lo, hi)| *lo == -*hi)
    }

    /// Distance from `x` to the nearest face, zero outside the box.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.bounds)
            .map(|(v, (lo, hi))| (v - lo).min(hi - v).max(0.0))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        self.bounds
            .iter()
            .map(|(lo, hi)| (hi - lo).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Intersection with another box of the same dimension.
    pub fn intersect(&self, other: &DomainBox) -> Option<DomainBox> {
        if self.dims() != other.dims() {
            return None;
        }
        let bounds = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| (a.0.max(b.0), a.1.min(b.1)))
            .collect();
        DomainBox::new(bounds).ok()
    }

    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| if lo == hi { lo } else { rng.random_range(lo..=hi) })
            .collect()
    }
}

impl fmt::Display for DomainBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "[{lo:?},{hi:?}]")?;
        }
        Ok(())
    }
}

/// One way of producing the endpoint pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    /// Explicit `lower` and `upper` endpoint functions.
    Bounds { lower: Expr, upper: Expr },
    /// `g(x) ⊙ C`.
    Scale { scale: Expr, c: Interval },
}

impl Form {
    fn arity(&self) -> usize {
        match self {
            Form::Bounds { lower, upper } => lower.arity().max(upper.arity()),
            Form::Scale { scale, .. } => scale.arity(),
        }
    }

    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        match self {
            Form::Bounds { lower, upper } => {
                let (l, u) = (lower.eval(x), upper.eval(x));
                if !l.is_finite() || !u.is_finite() {
                    return Err(EvalError::NonFinite { point: x.to_vec() });
                }
                Interval::new(l, u).map_err(|_| EvalError::Inverted {
                    point: x.to_vec(),
                    lower: l,
                    upper: u,
                })
            }
            Form::Scale { scale, c } => {
                let s = scale.eval(x);
                if !s.is_finite() {
                    return Err(EvalError::NonFinite { point: x.to_vec() });
                }
                c.scalar_mul(s).map_err(|_| EvalError::NonFinite { point: x.to_vec() })
            }
        }
    }

    /// Lower endpoint function. For `g ⊙ C` this is `min(g·c̲, g·c̄)`.
    pub fn lower_fn(&self) -> Expr {
        match self {
            Form::Bounds { lower, .. } => lower.clone(),
            Form::Scale { scale, c } => {
                (scale.clone() * c.lo()).min(scale.clone() * c.hi())
            }
        }
    }

    /// Upper endpoint function. For `g ⊙ C` this is `max(g·c̲, g·c̄)`.
    pub fn upper_fn(&self) -> Expr {
        match self {
            Form::Bounds { upper, .. } => upper.clone(),
            Form::Scale { scale, c } => {
                (scale.clone() * c.lo()).max(scale.clone() * c.hi())
            }
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Bounds { lower, upper } => write!(f, "lower: {lower}; upper: {upper}"),
            Form::Scale { scale, c } => {
                write!(f, "scale: {scale}; c: [{:?},{:?}]", c.lo(), c.hi())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub when: Predicate,
    pub form: Form,
}

/// Anything that maps points of a box to intervals. The estimators and
/// checkers are generic over this so that derived functions (sums, scalings,
/// endpoint projections) reuse the same machinery.
pub trait IntervalFn: Sync {
    fn domain(&self) -> &DomainBox;

    /// Membership in the function's domain, including any extra constraint.
    fn admits(&self, x: &[f64]) -> bool {
        self.domain().contains(x)
    }

    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError>;

    fn dims(&self) -> usize {
        self.domain().dims()
    }
}

impl<T: IntervalFn + ?Sized> IntervalFn for &T {
    fn domain(&self) -> &DomainBox {
        (**self).domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        (**self).admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        (**self).eval(x)
    }
}

/// An interval-valued function given by expressions, with optional
/// piecewise branches tried in declaration order before the default form.
#[derive(Clone, Debug, PartialEq)]
pub struct Ivf {
    domain: DomainBox,
    constraint: Option<Predicate>,
    branches: Vec<Branch>,
    default: Form,
}

impl Ivf {
    /// Builds and validates an IVF. Validation samples a 17ⁿ grid (capped
    /// at 10⁵ points) plus 10³ seeded pseudorandom points and rejects the
    /// function if `lower > upper` anywhere; points where the function is not
    /// finite are skipped.
    pub fn new(
        domain: DomainBox,
        constraint: Option<Predicate>,
        branches: Vec<Branch>,
        default: Form,
    ) -> Result<Ivf, IvfError> {
        let dims = domain.dims();
        let used = branches
            .iter()
            .map(|b| b.when.arity().max(b.form.arity()))
            .chain(constraint.iter().map(Predicate::arity))
            .fold(default.arity(), usize::max);
        if used > dims {
            return Err(IvfError::Variables { used, dims });
        }
        let ivf = Ivf {
            domain,
            constraint,
            branches,
            default,
        };
        ivf.validate()?;
        Ok(ivf)
    }

    pub fn bounds(domain: DomainBox, lower: Expr, upper: Expr) -> Result<Ivf, IvfError> {
        Ivf::new(domain, None, Vec::new(), Form::Bounds { lower, upper })
    }

    /// `x ↦ scale(x) ⊙ c`.
    pub fn scale_form(scale: Expr, c: Interval, domain: DomainBox) -> Result<Ivf, IvfError> {
        Ivf::new(domain, None, Vec::new(), Form::Scale { scale, c })
    }

    pub fn with_constraint(mut self, constraint: Predicate) -> Result<Ivf, IvfError> {
        self.constraint = Some(constraint);
        Ivf::new(self.domain, self.constraint, self.branches, self.default)
    }

    pub fn with_branch(mut self, when: Predicate, form: Form) -> Result<Ivf, IvfError> {
        self.branches.push(Branch { when, form });
        Ivf::new(self.domain, self.constraint, self.branches, self.default)
    }

    pub fn constraint(&self) -> Option<&Predicate> {
        self.constraint.as_ref()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn default_form(&self) -> &Form {
        &self.default
    }

    /// The form that applies at `x`: first matching branch, else the default.
    pub fn form_at(&self, x: &[f64]) -> &Form {
        self.branches
            .iter()
            .find(|b| b.when.test(x))
            .map(|b| &b.form)
            .unwrap_or(&self.default)
    }

    fn validate(&self) -> Result<(), IvfError> {
        let check = |x: &[f64]| -> Result<(), IvfError> {
            if !self.admits(x) {
                return Ok(());
            }
            match self.eval(x) {
                Err(EvalError::Inverted {
                    point,
                    lower,
                    upper,
                }) => Err(IvfError::Validation {
                    point,
                    lower,
                    upper,
                }),
                _ => Ok(()),
            }
        };

        let n = self.domain.dims();
        let per_dim = grid_points_per_dim(n);
        let total = per_dim.pow(n as u32);
        let mut x = vec![0.0; n];
        for idx in 0..total {
            let mut rem = idx;
            for (d, &(lo, hi)) in self.domain.bounds().iter().enumerate() {
                let k = rem % per_dim;
                rem /= per_dim;
                x[d] = if per_dim == 1 {
                    0.5 * (lo + hi)
                } else {
                    lo + (hi - lo) * k as f64 / (per_dim - 1) as f64
                };
            }
            check(&x)?;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        for _ in 0..VALIDATION_RANDOM {
            let x = self.domain.sample_uniform(&mut rng);
            check(&x)?;
        }
        Ok(())
    }
}

fn grid_points_per_dim(n: usize) -> usize {
    let mut k = VALIDATION_GRID;
    while k > 1 && (k as f64).powi(n as i32) > VALIDATION_GRID_CAP as f64 {
        k -= 1;
    }
    k
}

impl IntervalFn for Ivf {
    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn admits(&self, x: &[f64]) -> bool {
        self.domain.contains(x) && self.constraint.as_ref().is_none_or(|p| p.test(x))
    }

    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        if x.len() != self.domain.dims() {
            return Err(EvalError::Dimension {
                want: self.domain.dims(),
                got: x.len(),
            });
        }
        if !self.admits(x) {
            return Err(EvalError::Domain { point: x.to_vec() });
        }
        self.form_at(x).eval(x)
    }
}

/// Renders in the `.ivf` grammar; parses back to an equal IVF.
impl fmt::Display for Ivf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ivf {{ dom: {}", self.domain)?;
        if let Some(p) = &self.constraint {
            write!(f, "; where: {p}")?;
        }
        write!(f, "; {}", self.default)?;
        for b in &self.branches {
            write!(f, "; branch: {} -> {{ {} }}", b.when, b.form)?;
        }
        f.write_str(" }")
    }
}

/// `F ⊕ G` pointwise on `F`'s domain.
pub struct SumFn<F, G> {
    pub f: F,
    pub g: G,
}

impl<F: IntervalFn, G: IntervalFn> IntervalFn for SumFn<F, G> {
    fn domain(&self) -> &DomainBox {
        self.f.domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        self.f.admits(x) && self.g.admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        Ok(self.f.eval(x)?.add(self.g.eval(x)?)?)
    }
}

/// `λ ⊙ F` pointwise.
pub struct ScaledFn<F> {
    pub lambda: f64,
    pub f: F,
}

impl<F: IntervalFn> IntervalFn for ScaledFn<F> {
    fn domain(&self) -> &DomainBox {
        self.f.domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        self.f.admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        Ok(self.f.eval(x)?.scalar_mul(self.lambda)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Lower,
    Upper,
}

/// One endpoint function as a degenerate IVF `x ↦ [f(x), f(x)]`.
pub struct EndpointFn<F> {
    pub which: Endpoint,
    pub f: F,
}

impl<F: IntervalFn> IntervalFn for EndpointFn<F> {
    fn domain(&self) -> &DomainBox {
        self.f.domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        self.f.admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        let v = self.f.eval(x)?;
        let e = match self.which {
            Endpoint::Lower => v.lo(),
            Endpoint::Upper => v.hi(),
        };
        Ok(Interval::point(e)?)
    }
}

/// `x ↦ [‖F(x)‖, ‖F(x)‖]`.
pub struct NormFn<F> {
    pub f: F,
}

impl<F: IntervalFn> IntervalFn for NormFn<F> {
    fn domain(&self) -> &DomainBox {
        self.f.domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        self.f.admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        Ok(Interval::point(self.f.eval(x)?.norm())?)
    }
}

/// `x ↦ [g, g]` with `g = ‖F(x) ⊖_gH anchor‖`.
pub struct GapFn<F> {
    pub f: F,
    pub anchor: Interval,
}

impl<F: IntervalFn> IntervalFn for GapFn<F> {
    fn domain(&self) -> &DomainBox {
        self.f.domain()
    }
    fn admits(&self, x: &[f64]) -> bool {
        self.f.admits(x)
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        Ok(Interval::point(self.f.eval(x)?.gh_diff(self.anchor)?.norm())?)
    }
}

/// Any closure `x ↦ Interval` over a box.
pub struct ClosureFn<C> {
    pub domain: DomainBox,
    pub func: C,
}

impl<C> IntervalFn for ClosureFn<C>
where
    C: Fn(&[f64]) -> Result<Interval, EvalError> + Sync,
{
    fn domain(&self) -> &DomainBox {
        &self.domain
    }
    fn eval(&self, x: &[f64]) -> Result<Interval, EvalError> {
        if !self.domain.contains(x) {
            return Err(EvalError::Domain { point: x.to_vec() });
        }
        (self.func)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::CmpOp;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn scale_form_matches_scalar_mul() {
        let dom = DomainBox::symmetric(1, 10.0);
        let f = Ivf::scale_form(Expr::var(0), iv(3.0, 8.0), dom).unwrap();
        assert_eq!(f.eval(&[-1.0]).unwrap(), iv(-8.0, -3.0));

        let dom2 = DomainBox::new(vec![(-2.0, 2.0), (0.5, 2.0)]).unwrap();
        let g = Expr::var(0).pow(Expr::c(2.0)) * (1.0 + 1.0 / Expr::var(1));
        let f = Ivf::scale_form(g, iv(3.0, 8.0), dom2).unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), iv(6.0, 16.0));

        let q = Expr::quad(&[vec![1.0, 0.0], vec![0.0, 1.0]]).sqrt();
        let f = Ivf::scale_form(q, iv(1.0, 2.0), DomainBox::symmetric(2, 5.0)).unwrap();
        assert_eq!(f.eval(&[3.0, 4.0]).unwrap(), iv(5.0, 10.0));
    }

    #[test]
    fn endpoint_fns_of_scale_form_agree_with_eval() {
        let f = Ivf::scale_form(Expr::var(0), iv(-3.0, 2.0), DomainBox::symmetric(1, 4.0))
            .unwrap();
        let form = f.default_form();
        for x in [-3.5, -1.0, 0.0, 0.25, 4.0] {
            let v = f.eval(&[x]).unwrap();
            assert_eq!(form.lower_fn().eval(&[x]), v.lo());
            assert_eq!(form.upper_fn().eval(&[x]), v.hi());
        }
    }

    #[test]
    fn abs_c_evaluates() {
        let f = Ivf::scale_form(Expr::var(0).abs(), iv(2.0, 5.0), DomainBox::symmetric(1, 10.0))
            .unwrap();
        assert_eq!(f.eval(&[-2.0]).unwrap(), iv(4.0, 10.0));
    }

    #[test]
    fn branch_dispatch_first_match() {
        let c = iv(1.0, 2.0);
        let x = Expr::var(0);
        let f = Ivf::scale_form(x.clone().sin().pow(Expr::c(2.0)) / x.clone(), c, DomainBox::symmetric(1, 10.0))
            .unwrap()
            .with_branch(
                Predicate::cmp(x.clone(), CmpOp::Eq, 0.0),
                Form::Scale { scale: Expr::c(5.0), c },
            )
            .unwrap();
        assert_eq!(f.eval(&[0.0]).unwrap(), iv(5.0, 10.0));
        let v = f.eval(&[1.0]).unwrap();
        let s = 1f64.sin().powi(2);
        assert_eq!(v, iv(s, 2.0 * s));
    }

    #[test]
    fn domain_violations() {
        let f = Ivf::scale_form(Expr::var(0), Interval::ONE, DomainBox::symmetric(1, 1.0))
            .unwrap();
        assert!(matches!(f.eval(&[1.5]), Err(EvalError::Domain { .. })));
        assert!(matches!(
            f.eval(&[0.0, 0.0]),
            Err(EvalError::Dimension { want: 1, got: 2 })
        ));
        let f = f
            .with_constraint(Predicate::cmp(Expr::var(0), CmpOp::Ge, 0.0))
            .unwrap();
        assert!(f.eval(&[-0.5]).is_err());
        assert!(f.eval(&[0.5]).is_ok());
    }

    #[test]
    fn construction_rejects_inverted_bounds() {
        let err = Ivf::bounds(
            DomainBox::symmetric(1, 1.0),
            Expr::var(0),
            Expr::var(0) - 1.0,
        )
        .unwrap_err();
        match err {
            IvfError::Validation { point, lower, upper } => {
                assert_eq!(point.len(), 1);
                assert!(lower > upper);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn construction_rejects_extra_variables() {
        let err = Ivf::bounds(DomainBox::symmetric(1, 1.0), Expr::var(1), Expr::var(1) + 1.0)
            .unwrap_err();
        assert_eq!(err, IvfError::Variables { used: 2, dims: 1 });
    }

    #[test]
    fn non_finite_points_fail_eval_but_not_construction() {
        let f = Ivf::bounds(
            DomainBox::new(vec![(0.0, 1.0)]).unwrap(),
            Expr::c(0.0),
            1.0 / Expr::var(0),
        )
        .unwrap();
        assert!(matches!(f.eval(&[0.0]), Err(EvalError::NonFinite { .. })));
    }

    #[test]
    fn grid_cap() {
        assert_eq!(grid_points_per_dim(1), 17);
        assert_eq!(grid_points_per_dim(4), 17);
        assert!(grid_points_per_dim(5).pow(5) <= VALIDATION_GRID_CAP);
    }
}
