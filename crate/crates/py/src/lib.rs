//! Python bindings: `Interval`, `Ivf` with derivative estimates and checks.

use ghc_core::checks::{check_gh_continuous_with, EXACT_SLACK};
use ghc_core::limit::{DEFAULT_SEED, DEFAULT_TOL};
use ghc_core::{self as core, DerivativeQuery, IntervalFn, ScheduleOverrides};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Interval", module = "ghcalc", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct Interval(core::Interval);

#[derive(FromPyObject)]
enum Operand {
    Interval(Interval),
    Scalar(f64),
}

impl Operand {
    fn interval(&self) -> PyResult<core::Interval> {
        match self {
            Operand::Interval(i) => Ok(i.0),
            Operand::Scalar(v) => core::Interval::point(*v).map_err(value_err),
        }
    }
}

#[pymethods]
impl Interval {
    #[new]
    #[pyo3(signature = (lo, hi = None))]
    fn new(lo: f64, hi: Option<f64>) -> PyResult<Self> {
        core::Interval::new(lo, hi.unwrap_or(lo)).map(Interval).map_err(value_err)
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi()
    }

    fn width(&self) -> f64 {
        self.0.width()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn gh_diff(&self, other: Operand) -> PyResult<Interval> {
        self.0.gh_diff(other.interval()?).map(Interval).map_err(value_err)
    }

    fn precedes(&self, other: &Interval) -> bool {
        self.0.precedes(&other.0)
    }

    fn strictly_precedes(&self, other: &Interval) -> bool {
        self.0.strictly_precedes(&other.0)
    }

    /// One of "equal", "dominates", "strictly_dominates", "dominated_by",
    /// "strictly_dominated_by", "incomparable".
    fn dominance(&self, other: &Interval) -> &'static str {
        use core::Dominance::*;
        match self.0.dominance(&other.0) {
            Equal => "equal",
            StrictlyDominates => "strictly_dominates",
            Dominates => "dominates",
            StrictlyDominatedBy => "strictly_dominated_by",
            DominatedBy => "dominated_by",
            Incomparable => "incomparable",
        }
    }

    fn __add__(&self, other: Operand) -> PyResult<Interval> {
        self.0.add(other.interval()?).map(Interval).map_err(value_err)
    }

    fn __radd__(&self, other: Operand) -> PyResult<Interval> {
        self.__add__(other)
    }

    fn __sub__(&self, other: Operand) -> PyResult<Interval> {
        self.0.sub(other.interval()?).map(Interval).map_err(value_err)
    }

    fn __mul__(&self, other: Operand) -> PyResult<Interval> {
        match other {
            Operand::Scalar(v) => self.0.scalar_mul(v),
            Operand::Interval(i) => self.0.mul(i.0),
        }
        .map(Interval)
        .map_err(value_err)
    }

    fn __rmul__(&self, other: Operand) -> PyResult<Interval> {
        self.__mul__(other)
    }

    fn __truediv__(&self, other: Operand) -> PyResult<Interval> {
        self.0.div(other.interval()?).map(Interval).map_err(value_err)
    }

    fn __neg__(&self) -> Interval {
        Interval(self.0.neg())
    }

    fn __contains__(&self, v: f64) -> bool {
        self.0.contains(v)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Interval({:?}, {:?})", self.0.lo(), self.0.hi())
    }
}

#[pyclass(name = "DerivativeResult", module = "ghcalc", frozen, get_all)]
pub struct DerivativeResult {
    kind: &'static str,
    value: Interval,
    exists: bool,
    verdict: &'static str,
    levels: usize,
    residual: Option<f64>,
}

#[pymethods]
impl DerivativeResult {
    fn __repr__(&self) -> String {
        format!(
            "DerivativeResult(kind={:?}, value={}, exists={}, verdict={:?})",
            self.kind,
            self.value.0.to_text(),
            if self.exists { "True" } else { "False" },
            self.verdict
        )
    }
}

impl From<core::DerivativeResult> for DerivativeResult {
    fn from(r: core::DerivativeResult) -> Self {
        DerivativeResult {
            kind: match r.kind {
                core::DerivativeKind::Directional => "directional",
                core::DerivativeKind::UpperClarke => "upper_clarke",
                core::DerivativeKind::LowerClarke => "lower_clarke",
            },
            value: Interval(r.value),
            exists: r.exists,
            verdict: match r.estimate.verdict {
                core::Verdict::Converged => "converged",
                core::Verdict::Divergent => "divergent",
                core::Verdict::Stalled => "stalled",
            },
            levels: r.estimate.levels(),
            residual: r.estimate.residual.is_finite().then_some(r.estimate.residual),
        }
    }
}

#[pyclass(name = "CheckVerdict", module = "ghcalc", frozen, get_all)]
pub struct CheckVerdict {
    holds: bool,
    trials: usize,
    /// JSON of the failing input, if any.
    counterexample: Option<String>,
}

#[pymethods]
impl CheckVerdict {
    fn __bool__(&self) -> bool {
        self.holds
    }

    fn __repr__(&self) -> String {
        format!("CheckVerdict(holds={}, trials={})", if self.holds { "True" } else { "False" }, self.trials)
    }
}

impl From<core::CheckVerdict> for CheckVerdict {
    fn from(v: core::CheckVerdict) -> Self {
        CheckVerdict {
            holds: v.holds,
            trials: v.trials,
            counterexample: v.counterexample.map(|c| serde_json::to_string(&c).expect("counterexample")),
        }
    }
}

#[pyclass(name = "LipschitzReport", module = "ghcalc", frozen, get_all)]
pub struct LipschitzReport {
    k_estimate: f64,
    is_lipschitz_likely: bool,
    slope: f64,
    samples: usize,
}

/// An interval-valued function parsed from `.ivf` text.
#[pyclass(name = "Ivf", module = "ghcalc", frozen)]
pub struct Ivf(core::Ivf);

struct Knobs {
    tol: f64,
    overrides: ScheduleOverrides,
}

impl Knobs {
    fn query<'a>(&self, f: &'a core::Ivf, x: &[f64], h: &[f64]) -> DerivativeQuery<'a> {
        DerivativeQuery::new(f, x, h)
            .with_schedule(self.overrides.apply(f.dims()))
            .with_tol(self.tol)
    }
}

fn knobs(tol: Option<f64>, seed: Option<u64>, delta0: Option<f64>, levels: Option<usize>, samples: Option<usize>) -> Knobs {
    Knobs {
        tol: tol.unwrap_or(DEFAULT_TOL),
        overrides: ScheduleOverrides {
            delta0,
            max_levels: levels,
            samples_per_level: samples,
            seed: Some(seed.unwrap_or(DEFAULT_SEED)),
            ..ScheduleOverrides::default()
        },
    }
}

impl Ivf {
    fn derivative(
        &self,
        py: Python<'_>,
        which: fn(&DerivativeQuery<'_>) -> Result<core::DerivativeResult, core::DerivError>,
        x: Vec<f64>,
        h: Vec<f64>,
        k: Knobs,
    ) -> PyResult<DerivativeResult> {
        let f = &self.0;
        py.detach(|| which(&k.query(f, &x, &h))).map(Into::into).map_err(value_err)
    }
}

#[pymethods]
impl Ivf {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        core::parse_ivf(text).map(Ivf).map_err(value_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        Self::new(&text)
    }

    #[getter]
    fn dims(&self) -> usize {
        self.0.dims()
    }

    fn eval(&self, x: Vec<f64>) -> PyResult<Interval> {
        self.0.eval(&x).map(Interval).map_err(value_err)
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<Interval> {
        self.eval(x)
    }

    #[pyo3(signature = (x, h, *, tol = None, seed = None, delta0 = None, levels = None, samples = None))]
    #[allow(clippy::too_many_arguments)]
    fn directional(
        &self,
        py: Python<'_>,
        x: Vec<f64>,
        h: Vec<f64>,
        tol: Option<f64>,
        seed: Option<u64>,
        delta0: Option<f64>,
        levels: Option<usize>,
        samples: Option<usize>,
    ) -> PyResult<DerivativeResult> {
        self.derivative(py, core::directional, x, h, knobs(tol, seed, delta0, levels, samples))
    }

    #[pyo3(signature = (x, h, *, tol = None, seed = None, delta0 = None, levels = None, samples = None))]
    #[allow(clippy::too_many_arguments)]
    fn upper_clarke(
        &self,
        py: Python<'_>,
        x: Vec<f64>,
        h: Vec<f64>,
        tol: Option<f64>,
        seed: Option<u64>,
        delta0: Option<f64>,
        levels: Option<usize>,
        samples: Option<usize>,
    ) -> PyResult<DerivativeResult> {
        self.derivative(py, core::upper_clarke, x, h, knobs(tol, seed, delta0, levels, samples))
    }

    #[pyo3(signature = (x, h, *, tol = None, seed = None, delta0 = None, levels = None, samples = None))]
    #[allow(clippy::too_many_arguments)]
    fn lower_clarke(
        &self,
        py: Python<'_>,
        x: Vec<f64>,
        h: Vec<f64>,
        tol: Option<f64>,
        seed: Option<u64>,
        delta0: Option<f64>,
        levels: Option<usize>,
        samples: Option<usize>,
    ) -> PyResult<DerivativeResult> {
        self.derivative(py, core::lower_clarke, x, h, knobs(tol, seed, delta0, levels, samples))
    }

    #[pyo3(signature = (trials = 2000, seed = DEFAULT_SEED))]
    fn check_convex(&self, py: Python<'_>, trials: usize, seed: u64) -> CheckVerdict {
        let f = &self.0;
        py.detach(|| core::check_convex(f, trials, seed)).into()
    }

    #[pyo3(signature = (trials = 2000, seed = DEFAULT_SEED, tol = EXACT_SLACK))]
    fn check_sublinear(&self, py: Python<'_>, trials: usize, seed: u64, tol: f64) -> PyResult<CheckVerdict> {
        let f = &self.0;
        py.detach(|| core::check_sublinear(f, trials, seed, tol)).map(Into::into).map_err(value_err)
    }

    #[pyo3(signature = (x, tol = DEFAULT_TOL))]
    fn check_continuous(&self, py: Python<'_>, x: Vec<f64>, tol: f64) -> PyResult<CheckVerdict> {
        let f = &self.0;
        let sched = ScheduleOverrides::default().apply(f.dims());
        py.detach(|| check_gh_continuous_with(f, &x, tol, &sched)).map(Into::into).map_err(value_err)
    }

    #[pyo3(signature = (trials = 20000, seed = DEFAULT_SEED))]
    fn check_lipschitz(&self, py: Python<'_>, trials: usize, seed: u64) -> PyResult<LipschitzReport> {
        let f = &self.0;
        let r = py.detach(|| core::check_lipschitz(f, f.domain(), trials, seed)).map_err(value_err)?;
        Ok(LipschitzReport {
            k_estimate: r.k_estimate,
            is_lipschitz_likely: r.is_lipschitz_likely,
            slope: r.slope,
            samples: r.samples,
        })
    }
}

#[pyfunction]
fn parse_ivf(text: &str) -> PyResult<Ivf> {
    Ivf::new(text)
}

#[pymodule]
fn ghcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the module contents to `m`; used by embedding hosts and tests.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Interval>()?;
    m.add_class::<Ivf>()?;
    m.add_class::<DerivativeResult>()?;
    m.add_class::<CheckVerdict>()?;
    m.add_class::<LipschitzReport>()?;
    m.add_function(wrap_pyfunction!(parse_ivf, m)?)?;
    Ok(())
}
