//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use ghc_cli::fixtures::load;
use ghc_cli::scenarios::{self, Settings, SCENARIOS};
use ghc_core::checks::EXACT_SLACK;
use ghc_core::limit::{DEFAULT_SEED, DEFAULT_TOL};
use ghc_core::suites::{self, SuiteConfig};
use ghc_core::{
    check_convex, check_sublinear, directional, upper_clarke, DerivativeQuery, Dominance, DomainBox, Expr,
    Interval, Ivf, ScheduleOverrides, Verdict,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-3;
const EXACT_TRIALS: usize = 100_000;
const EXACT_BUDGET: Duration = Duration::from_secs(10);
const QUERY_BUDGET: Duration = Duration::from_secs(1);
const SUITE_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn close(a: Interval, b: Interval, tol: f64) -> bool {
    (a.lo() - b.lo()).abs() <= tol && (a.hi() - b.hi()).abs() <= tol
}

fn dyadic(rng: &mut StdRng) -> f64 {
    rng.random_range(-16_000_000i64..=16_000_000) as f64 / 16.0
}

fn interval(rng: &mut StdRng) -> Interval {
    let (a, b) = (dyadic(rng), dyadic(rng));
    iv(a.min(b), a.max(b))
}

fn nonneg(rng: &mut StdRng) -> Interval {
    let (a, b) = (dyadic(rng).abs(), dyadic(rng).abs());
    iv(a.min(b), a.max(b))
}

fn s(t: f64, c: Interval) -> Interval {
    c.scalar_mul(t).unwrap()
}

fn exact_arithmetic() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(DEFAULT_SEED);
    type Invariant = (&'static str, fn(&mut StdRng) -> bool);
    let invariants: [Invariant; 9] = [
        ("|x+y|⊙C ⪯ |x|⊙C ⊕ |y|⊙C for C ⪰ 0", |r| {
            let (x, y, c) = (dyadic(r), dyadic(r), nonneg(r));
            s((x + y).abs(), c).precedes(&s(x.abs(), c).add(s(y.abs(), c)).unwrap())
        }),
        ("|x|⊙C ⊕ |y|⊙C ⪯ |x+y|⊙C for C ⪯ 0", |r| {
            let (x, y, c) = (dyadic(r), dyadic(r), nonneg(r).neg());
            s(x.abs(), c).add(s(y.abs(), c)).unwrap().precedes(&s((x + y).abs(), c))
        }),
        ("(A ⊖ C) ⊕ (C ⊖ B) ⊀ A ⊖ B", |r| {
            let (a, b, c) = (interval(r), interval(r), interval(r));
            let left = a.gh_diff(c).unwrap().add(c.gh_diff(b).unwrap()).unwrap();
            !a.gh_diff(b).unwrap().strictly_precedes(&left)
        }),
        ("B ⪯ A ⊕ [L, L] with L = ‖B ⊖ A‖", |r| {
            let (a, b) = (interval(r), interval(r));
            let l = b.gh_diff(a).unwrap().norm();
            b.precedes(&a.add(Interval::point(l).unwrap()).unwrap())
        }),
        ("‖(A ⊖ B) ⊖ (C ⊖ D)‖ ≤ ‖A ⊖ C‖ + ‖B ⊖ D‖", |r| {
            let (a, b, c, d) = (interval(r), interval(r), interval(r), interval(r));
            let left = a.gh_diff(b).unwrap().gh_diff(c.gh_diff(d).unwrap()).unwrap().norm();
            left <= a.gh_diff(c).unwrap().norm() + b.gh_diff(d).unwrap().norm()
        }),
        ("A ⊖ A = [0, 0]", |r| {
            let a = interval(r);
            a.gh_diff(a).unwrap() == Interval::ZERO
        }),
        ("norm: triangle inequality and positivity", |r| {
            let (a, b) = (interval(r), interval(r));
            a.add(b).unwrap().norm() <= a.norm() + b.norm() && a.norm() >= 0.0 && (a.norm() == 0.0) == (a == Interval::ZERO)
        }),
        ("norm: ‖λA‖ = |λ|‖A‖", |r| {
            let a = interval(r);
            let lambda = r.random_range(-64i32..=64) as f64 / 4.0;
            a.scalar_mul(lambda).unwrap().norm() == lambda.abs() * a.norm()
        }),
        ("dominance antisymmetry", |r| {
            let a = interval(r);
            // equal pairs are rare on the grid, so mix them in
            let b = if r.random_bool(0.25) { a } else { interval(r) };
            ((a.precedes(&b) && b.precedes(&a)) == (a == b)) && a.dominance(&b).reversed() == b.dominance(&a)
        }),
    ];
    let mut failed = Vec::new();
    for (name, check) in invariants {
        let failures = (0..EXACT_TRIALS).filter(|_| !check(&mut rng)).count();
        if failures > 0 {
            failed.push(format!("{name}: {failures}"));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{} invariants × {EXACT_TRIALS} trials, {} failing, {:.2}s (budget {}s)",
        invariants.len(),
        failed.len(),
        elapsed.as_secs_f64(),
        EXACT_BUDGET.as_secs()
    );
    if !failed.is_empty() {
        return outcome(false, format!("{detail}; {}", failed.join("; ")));
    }
    outcome(elapsed < EXACT_BUDGET, detail)
}

fn gh_fixtures() -> Outcome {
    let (a, b, c) = (iv(4.0, 10.0), iv(-3.0, 2.0), iv(-7.5, -6.0));
    let d = b.gh_diff(a).unwrap();
    let back = a.add(d).unwrap();
    let ac = a.add(c).unwrap();
    let ok = d == iv(-8.0, -7.0)
        && back == iv(-4.0, 3.0)
        && back != b
        && ac == iv(-3.5, 4.0)
        && b.dominance(&ac) == Dominance::Incomparable;
    outcome(
        ok,
        format!("B ⊖ A = {}, A ⊕ (B ⊖ A) = {}, A ⊕ C = {}, B vs A ⊕ C: {:?}", d, back, ac, b.dominance(&ac)),
    )
}

fn query<'a>(f: &'a Ivf, x: &[f64], h: &[f64]) -> DerivativeQuery<'a> {
    DerivativeQuery::new(f, x, h).with_tol(TOL)
}

fn abs_clarke() -> Outcome {
    let f = load("abs_c");
    let mut ok = true;
    let mut parts = Vec::new();
    for (h, want) in [(1.0, iv(2.0, 5.0)), (-3.0, iv(6.0, 15.0))] {
        let start = Instant::now();
        let r = upper_clarke(&query(&f, &[0.0], &[h])).unwrap();
        let took = start.elapsed();
        ok &= r.exists && close(r.value, want, TOL) && took < QUERY_BUDGET;
        parts.push(format!("h={h}: {} in {:.3}s", r.value, took.as_secs_f64()));
    }
    outcome(ok, parts.join(", "))
}

fn removable_jump() -> Outcome {
    let f = load("removable_jump");
    let c = upper_clarke(&query(&f, &[0.0], &[2.0])).unwrap();
    let d = directional(&query(&f, &[0.0], &[1.0])).unwrap();
    let clarke_ok = c.exists && close(c.value, iv(2.0, 4.0), TOL);
    outcome(
        clarke_ok && !d.exists,
        format!(
            "upper Clarke h=2: {} (exists {}, want [2, 4]); directional h=1 exists {} ({:?})",
            c.value, c.exists, d.exists, d.estimate.verdict
        ),
    )
}

fn quadrant_blowup() -> Outcome {
    let f = load("quadrant_blowup");
    let d = directional(&query(&f, &[0.0, 0.0], &[1.0, 1.0])).unwrap();
    let c = upper_clarke(&query(&f, &[0.0, 0.0], &[1.0, 1.0])).unwrap();
    let dir_ok = d.exists && close(d.value, iv(3.0, 8.0), TOL);
    let clarke_ok = !c.exists && c.estimate.verdict == Verdict::Divergent;
    outcome(
        dir_ok && clarke_ok,
        format!(
            "directional: {} (exists {}); upper Clarke: {} (exists {}, {:?}, want divergent)",
            d.value, d.exists, c.value, c.exists, c.estimate.verdict
        ),
    )
}

fn settings() -> Settings {
    Settings { tol: TOL, seed: DEFAULT_SEED, overrides: ScheduleOverrides::default() }
}

fn sqrt_regularity() -> Outcome {
    let s = scenarios::reproduce("remark-2-2", &settings()).unwrap();
    let failed: Vec<String> = s.rows.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.check, r.observed)).collect();
    let detail = if failed.is_empty() {
        format!("{} checks: continuity at 10 interior points, Lipschitz not likely", s.rows.len())
    } else {
        failed.join("; ")
    };
    outcome(s.passed, detail)
}

fn suite_cfg() -> SuiteConfig {
    SuiteConfig { seed: DEFAULT_SEED, tol: TOL, overrides: ScheduleOverrides::default() }
}

fn clarke_bound() -> Outcome {
    let start = Instant::now();
    let r = suites::clarke_bound_suite(50, 8, &suite_cfg());
    let took = start.elapsed();
    outcome(
        r.exists == r.cases && r.within_bound == r.cases && took < SUITE_BUDGET,
        format!(
            "exists {}/{}, bounded {}/{}, worst excess {:.3e}, {:.1}s",
            r.exists,
            r.cases,
            r.within_bound,
            r.cases,
            r.worst_excess,
            took.as_secs_f64()
        ),
    )
}

fn convex_gap() -> Outcome {
    let r = suites::convex_gap_suite(50, 8, &suite_cfg());
    let share = r.convergent as f64 / r.cases as f64;
    outcome(
        r.within_bound == r.convergent && share >= 0.95,
        format!(
            "convergent {}/{}, gap ≤ 3·tol in {}/{}, worst gap {:.3e}",
            r.convergent, r.cases, r.within_bound, r.convergent, r.worst_gap
        ),
    )
}

fn clarke_sublinear() -> Outcome {
    let r = suites::clarke_sublinear_suite(20, 100, &suite_cfg());
    outcome(
        r.nonexistent == 0 && r.homogeneity_failures == 0 && r.subadditivity_failures == 0,
        format!(
            "homogeneity {}/{} failing, subadditivity {}/{} failing, {} missing estimates",
            r.homogeneity_failures, r.homogeneity_checks, r.subadditivity_failures, r.subadditivity_checks, r.nonexistent
        ),
    )
}

fn limsup_rules() -> Outcome {
    let r = suites::limsup_rules_suite(30, 5, &suite_cfg());
    let total = r.pairs * r.points;
    outcome(
        r.subadditive == total && r.homogeneous == total && r.norm_bounded == total,
        format!(
            "subadditive {}/{total}, homogeneous {}/{total}, norm bound {}/{total}",
            r.subadditive, r.homogeneous, r.norm_bounded
        ),
    )
}

fn sublinear_examples() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let mixed = load("abs_mixed_sign");
    let v = check_sublinear(&mixed, 2000, DEFAULT_SEED, EXACT_SLACK).unwrap();
    ok &= v.holds;
    parts.push(format!("|x|⊙[-3,2] sublinear {}", v.holds));

    let mut rng = StdRng::seed_from_u64(DEFAULT_SEED ^ 0x0511);
    let mut spd_ok = 0;
    const DRAWS: usize = 10;
    for _ in 0..DRAWS {
        // AᵀA + εI is symmetric positive definite
        let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let eps = rng.random_range(0.05..1.0);
        let q = vec![
            vec![a[0] * a[0] + a[2] * a[2] + eps, a[0] * a[1] + a[2] * a[3]],
            vec![a[0] * a[1] + a[2] * a[3], a[1] * a[1] + a[3] * a[3] + eps],
        ];
        // C ⊀ 0: a positive upper end keeps C out of the strictly negative cone
        let hi = rng.random_range(0.1..3.0);
        let c = iv(rng.random_range(-3.0..hi), hi);
        let f = Ivf::scale_form(Expr::quad(&q).sqrt(), c, DomainBox::symmetric(2, 5.0)).unwrap();
        if check_sublinear(&f, 2000, DEFAULT_SEED, EXACT_SLACK).unwrap().holds {
            spd_ok += 1;
        }
    }
    ok &= spd_ok == DRAWS;
    parts.push(format!("√(xᵀQx)⊙C sublinear {spd_ok}/{DRAWS}"));

    let v = check_convex(&mixed, 2000, DEFAULT_SEED);
    let replayed = v.counterexample.as_ref().map(|c| c.replay(&mixed).unwrap()) == Some(true);
    let again = check_convex(&mixed, 2000, DEFAULT_SEED) == v;
    ok &= !v.holds && replayed && again;
    parts.push(format!("|x|⊙[-3,2] convex {}, counterexample replays {replayed}, rerun identical {again}", v.holds));
    outcome(ok, parts.join("; "))
}

fn determinism() -> Outcome {
    // reduced sampling keeps two passes over every scenario affordable; the
    // property under test is byte equality, not the verdicts
    let flags = ["--format", "json", "--samples", "128", "--lambda-samples", "4"];
    let run = |name: &str| {
        Command::new(env!("CARGO_BIN_EXE_ghc"))
            .args(["reproduce", name])
            .args(flags)
            .output()
            .expect("ghc runs")
    };
    let mut differing = Vec::new();
    for name in SCENARIOS {
        let (a, b) = (run(name), run(name));
        let parsed = serde_json::from_slice::<serde_json::Value>(&a.stdout).is_ok();
        if a.stdout != b.stdout || a.status.code() != b.status.code() || !parsed {
            differing.push(name);
        }
    }
    let detail = if differing.is_empty() {
        format!("{} scenarios, two runs each, identical JSON", SCENARIOS.len())
    } else {
        format!("differing or invalid: {}", differing.join(", "))
    };
    outcome(differing.is_empty(), detail)
}

fn main() {
    assert_eq!(TOL, DEFAULT_TOL);
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("exact interval arithmetic", exact_arithmetic),
        ("gH-difference fixtures", gh_fixtures),
        ("Clarke derivative of |x|⊙[2,5]", abs_clarke),
        ("removable jump: Clarke h⊙C, directional absent", removable_jump),
        ("quadrant blow-up: directional [3,8], Clarke absent", quadrant_blowup),
        ("√x⊙[2,5] continuous but not Lipschitz", sqrt_regularity),
        ("Clarke bound over Lipschitz family", clarke_bound),
        ("Clarke = directional over convex family", convex_gap),
        ("Clarke derivative is sublinear", clarke_sublinear),
        ("limsup rules", limsup_rules),
        ("sublinearity and convexity examples", sublinear_examples),
        ("reproduce determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
