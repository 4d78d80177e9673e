//! End-to-end scenarios behind `ghc reproduce`: each runs bundled fixtures
//! or generated families and compares against the stated values.

use ghc_core::checks::EXACT_SLACK;
use ghc_core::interval::format_sig9;
use ghc_core::suites::{self, SuiteConfig};
use ghc_core::{
    check_convex, check_gh_continuous, check_lipschitz, check_sublinear, directional, upper_clarke, DerivError,
    DerivativeQuery, DerivativeResult, Dominance, DomainBox, Expr, Interval, IntervalFn, Ivf, ScheduleOverrides,
};
use serde::Serialize;

use crate::fixtures::load;

pub const SCENARIOS: [&str; 11] = [
    "example-abs-clarke",
    "remark-2-1",
    "remark-2-2",
    "remark-3-3",
    "remark-3-4",
    "example-3-1",
    "example-3-2",
    "remark-3-6",
    "theorem-3-1",
    "theorem-3-2",
    "theorem-3-3",
];

pub const SUITE_MEMBERS: usize = 50;
pub const SUITE_DIRECTIONS: usize = 8;
pub const SUBLINEAR_MEMBERS: usize = 20;
pub const SUBLINEAR_PAIRS: usize = 100;
const CHECK_TRIALS: usize = 2000;
const LIPSCHITZ_TRIALS: usize = 20_000;

/// Estimator and checker settings shared by every scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub overrides: ScheduleOverrides,
}

impl Settings {
    pub fn query<'a, F: IntervalFn + ?Sized>(&self, f: &'a F, xbar: &[f64], h: &[f64]) -> DerivativeQuery<'a, F> {
        let mut overrides = self.overrides.clone();
        overrides.seed = Some(self.seed);
        DerivativeQuery::new(f, xbar, h)
            .with_schedule(overrides.apply(f.dims()))
            .with_tol(self.tol)
    }

    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            tol: self.tol,
            overrides: self.overrides.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: &'static str,
    pub passed: bool,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

fn row(check: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, passed: bool) -> Row {
    Row {
        check: check.into(),
        expected: expected.into(),
        observed: observed.into(),
        passed,
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("ordered constants")
}

fn describe(r: &Result<DerivativeResult, DerivError>) -> String {
    match r {
        Ok(r) if r.exists => format!("{} (exists)", r.value.to_text()),
        Ok(r) => format!(
            "does not exist ({}; last level {})",
            serde_json::to_value(r.estimate.verdict).expect("verdict").as_str().unwrap_or(""),
            r.value.to_text()
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn value_row(check: String, want: Interval, r: Result<DerivativeResult, DerivError>, tol: f64) -> Row {
    let passed = matches!(&r, Ok(d) if d.exists
        && (d.value.lo() - want.lo()).abs() <= tol
        && (d.value.hi() - want.hi()).abs() <= tol);
    row(check, format!("{} (exists)", want.to_text()), describe(&r), passed)
}

fn absent_row(check: String, r: Result<DerivativeResult, DerivError>) -> Row {
    let passed = matches!(&r, Ok(d) if !d.exists);
    row(check, "does not exist", describe(&r), passed)
}

fn exact_row(check: &str, want: Interval, got: Interval) -> Row {
    row(check, want.to_text(), got.to_text(), want == got)
}

fn holds(v: bool) -> &'static str {
    if v {
        "holds"
    } else {
        "fails"
    }
}

fn sublinear_row(name: &str, f: &Ivf, seed: u64) -> Row {
    let check = format!("{name} is sublinear");
    match check_sublinear(f, CHECK_TRIALS, seed, EXACT_SLACK) {
        Ok(v) => row(check, "holds", holds(v.holds), v.holds),
        Err(e) => row(check, "holds", format!("error: {e}"), false),
    }
}

fn example_abs_clarke(s: &Settings) -> Vec<Row> {
    let f = load("abs_c");
    [(1.0, iv(2.0, 5.0)), (-3.0, iv(6.0, 15.0))]
        .into_iter()
        .map(|(h, want)| {
            let r = upper_clarke(&s.query(&f, &[0.0], &[h]));
            value_row(format!("upper Clarke derivative of |x|⊙[2,5] at 0, h = {h}"), want, r, s.tol)
        })
        .collect()
}

fn remark_2_1() -> Vec<Row> {
    let (a, b, c) = (iv(4.0, 10.0), iv(-3.0, 2.0), iv(-7.5, -6.0));
    let d = b.gh_diff(a).expect("finite");
    let back = a.add(d).expect("finite");
    let ac = a.add(c).expect("finite");
    let verdict = b.dominance(&ac);
    vec![
        exact_row("B ⊖gH A", iv(-8.0, -7.0), d),
        exact_row("A ⊕ (B ⊖gH A)", iv(-4.0, 3.0), back),
        row("A ⊕ (B ⊖gH A) differs from B", "true", (back != b).to_string(), back != b),
        row("B ⊖gH A ⪯ C", "true", d.precedes(&c).to_string(), d.precedes(&c)),
        exact_row("A ⊕ C", iv(-3.5, 4.0), ac),
        row(
            "dominance(B, A ⊕ C)",
            "incomparable",
            format!("{verdict:?}").to_lowercase(),
            verdict == Dominance::Incomparable,
        ),
    ]
}

fn remark_2_2(s: &Settings) -> Vec<Row> {
    let f = load("sqrt");
    let mut rows: Vec<Row> = (0..10)
        .map(|i| {
            let x = 0.5 + i as f64;
            let check = format!("√x⊙[2,5] is gH-continuous at {x}");
            match check_gh_continuous(&f, &[x], s.tol) {
                Ok(v) => row(check, "holds", holds(v.holds), v.holds),
                Err(e) => row(check, "holds", format!("error: {e}"), false),
            }
        })
        .collect();
    let check = "√x⊙[2,5] is gH-Lipschitz on [0,10]";
    rows.push(match check_lipschitz(&f, f.domain(), LIPSCHITZ_TRIALS, s.seed) {
        Ok(r) => {
            let observed = if r.is_lipschitz_likely {
                format!("likely (K′ ≈ {})", format_sig9(r.k_estimate))
            } else {
                format!("not likely (log-log slope {})", format_sig9(r.slope))
            };
            row(check, "not likely", observed, !r.is_lipschitz_likely)
        }
        Err(e) => row(check, "not likely", format!("error: {e}"), false),
    });
    rows
}

fn remark_3_3(s: &Settings) -> Vec<Row> {
    let f = load("removable_jump");
    vec![
        value_row(
            "upper Clarke derivative at 0, h = 2".into(),
            iv(2.0, 4.0),
            upper_clarke(&s.query(&f, &[0.0], &[2.0])),
            s.tol,
        ),
        absent_row("directional derivative at 0, h = 1".into(), directional(&s.query(&f, &[0.0], &[1.0]))),
    ]
}

fn remark_3_4(s: &Settings) -> Vec<Row> {
    let f = load("quadrant_blowup");
    let (x, h) = ([0.0, 0.0], [1.0, 1.0]);
    vec![
        value_row(
            "directional derivative at (0,0), h = (1,1)".into(),
            iv(3.0, 8.0),
            directional(&s.query(&f, &x, &h)),
            s.tol,
        ),
        absent_row("upper Clarke derivative at (0,0), h = (1,1)".into(), upper_clarke(&s.query(&f, &x, &h))),
    ]
}

fn example_3_1(s: &Settings) -> Vec<Row> {
    vec![
        sublinear_row("|x|⊙[1,4]", &load("abs_sublinear"), s.seed),
        sublinear_row("|x|⊙[-3,2]", &load("abs_mixed_sign"), s.seed),
    ]
}

fn example_3_2(s: &Settings) -> Vec<Row> {
    let mut rows = vec![sublinear_row("√(xᵀQx)⊙[-1,2], Q = [[2,1],[1,3]]", &load("quadratic_norm"), s.seed)];
    // A = [[a, b], [0, c]] gives the positive definite AᵀA + I/4
    let draws = [(0.5, -1.0, 1.5, -2.0, 1.0), (1.2, 0.3, -0.7, 0.5, 3.0), (-0.4, 1.1, 0.2, -1.0, 0.25)];
    for (a, b, c, lo, hi) in draws {
        let q = vec![vec![a * a + 0.25, a * b], vec![a * b, b * b + c * c + 0.25]];
        let f = Ivf::scale_form(Expr::quad(&q).sqrt(), iv(lo, hi), DomainBox::symmetric(2, 5.0)).expect("scale form");
        let entries: Vec<String> = q
            .iter()
            .map(|r| format!("[{}, {}]", format_sig9(r[0]), format_sig9(r[1])))
            .collect();
        let name = format!("√(xᵀQx)⊙[{lo},{hi}], Q = [{}]", entries.join(", "));
        rows.push(sublinear_row(&name, &f, s.seed));
    }
    rows
}

fn remark_3_6(s: &Settings) -> Vec<Row> {
    let f = load("abs_mixed_sign");
    let mut rows = vec![sublinear_row("|x|⊙[-3,2]", &f, s.seed)];
    let v = check_convex(&f, CHECK_TRIALS, s.seed);
    rows.push(row("|x|⊙[-3,2] is convex", "fails", holds(v.holds), !v.holds));
    let replayed = v.counterexample.as_ref().map(|c| c.replay(&f));
    let observed = match &replayed {
        Some(Ok(true)) => "reproduced".to_string(),
        Some(Ok(false)) => "not reproduced".to_string(),
        Some(Err(e)) => format!("error: {e}"),
        None => "no counterexample".to_string(),
    };
    rows.push(row(
        "convexity counterexample replays",
        "reproduced",
        observed,
        matches!(replayed, Some(Ok(true))),
    ));
    rows
}

fn ratio(a: usize, b: usize) -> String {
    format!("{a}/{b}")
}

fn theorem_3_1(s: &Settings) -> (Vec<Row>, serde_json::Value) {
    let r = suites::clarke_bound_suite(SUITE_MEMBERS, SUITE_DIRECTIONS, &s.suite_config());
    let rows = vec![
        row("upper Clarke derivative exists", ratio(r.cases, r.cases), ratio(r.exists, r.cases), r.exists == r.cases),
        row(
            "‖F_C(x̄)(h)‖ ≤ K′‖h‖ + 3·tol",
            ratio(r.cases, r.cases),
            ratio(r.within_bound, r.cases),
            r.within_bound == r.cases,
        ),
    ];
    (rows, serde_json::to_value(&r).expect("report"))
}

fn theorem_3_2(s: &Settings) -> (Vec<Row>, serde_json::Value) {
    let r = suites::convex_gap_suite(SUITE_MEMBERS, SUITE_DIRECTIONS, &s.suite_config());
    let need = (suites::CONVERGENT_SHARE * r.cases as f64).ceil() as usize;
    let rows = vec![
        row(
            "both derivatives converge",
            format!("at least {need}/{}", r.cases),
            ratio(r.convergent, r.cases),
            r.convergent >= need,
        ),
        row(
            "‖F_C ⊖gH F_D‖ ≤ 3·tol where convergent",
            ratio(r.convergent, r.convergent),
            ratio(r.within_bound, r.convergent),
            r.within_bound == r.convergent,
        ),
    ];
    (rows, serde_json::to_value(&r).expect("report"))
}

fn theorem_3_3(s: &Settings) -> (Vec<Row>, serde_json::Value) {
    let r = suites::clarke_sublinear_suite(SUBLINEAR_MEMBERS, SUBLINEAR_PAIRS, &s.suite_config());
    let rows = vec![
        row("Clarke estimates exist", "0 missing", format!("{} missing", r.nonexistent), r.nonexistent == 0),
        row(
            "positive homogeneity within (1+α)·3·tol",
            ratio(r.homogeneity_checks, r.homogeneity_checks),
            ratio(r.homogeneity_checks - r.homogeneity_failures, r.homogeneity_checks),
            r.homogeneity_failures == 0,
        ),
        row(
            "F_C(h₁+h₂) ⊁ F_C(h₁) ⊕ F_C(h₂) with 3·tol inflation",
            ratio(r.subadditivity_checks, r.subadditivity_checks),
            ratio(r.subadditivity_checks - r.subadditivity_failures, r.subadditivity_checks),
            r.subadditivity_failures == 0,
        ),
    ];
    (rows, serde_json::to_value(&r).expect("report"))
}

/// Runs a named scenario; `None` for an unknown name.
pub fn reproduce(name: &str, s: &Settings) -> Option<Scenario> {
    let name = *SCENARIOS.iter().find(|n| **n == name)?;
    let (rows, details) = match name {
        "example-abs-clarke" => (example_abs_clarke(s), None),
        "remark-2-1" => (remark_2_1(), None),
        "remark-2-2" => (remark_2_2(s), None),
        "remark-3-3" => (remark_3_3(s), None),
        "remark-3-4" => (remark_3_4(s), None),
        "example-3-1" => (example_3_1(s), None),
        "example-3-2" => (example_3_2(s), None),
        "remark-3-6" => (remark_3_6(s), None),
        "theorem-3-1" => theorem_3_1(s).map_second(Some),
        "theorem-3-2" => theorem_3_2(s).map_second(Some),
        "theorem-3-3" => theorem_3_3(s).map_second(Some),
        _ => unreachable!("name comes from SCENARIOS"),
    };
    Some(Scenario {
        name,
        passed: rows.iter().all(|r| r.passed),
        rows,
        details,
    })
}

trait MapSecond<A, B> {
    fn map_second<C>(self, f: impl FnOnce(B) -> C) -> (A, C);
}

impl<A, B> MapSecond<A, B> for (A, B) {
    fn map_second<C>(self, f: impl FnOnce(B) -> C) -> (A, C) {
        (self.0, f(self.1))
    }
}

impl Scenario {
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.check.chars().count()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.name);
        for r in &self.rows {
            let pad = width - r.check.chars().count();
            out.push_str(&format!(
                "  {}  {}{}  expected {}  observed {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.check,
                " ".repeat(pad),
                r.expected,
                r.observed
            ));
        }
        let failed = self.rows.iter().filter(|r| !r.passed).count();
        if failed == 0 {
            out.push_str(&format!("{}: PASS\n", self.name));
        } else {
            out.push_str(&format!("{}: FAIL ({failed} of {} checks failed)\n", self.name, self.rows.len()));
        }
        out
    }
}
