use std::path::PathBuf;
use std::process::Command;

use ghc_cli::error::{EXIT_DOMAIN, EXIT_NONEXISTENT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use ghc_cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "paper", &format!("{name}.ivf")]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn ghc(args: &[&str]) -> ghc_cli::Outcome {
    run(std::iter::once("ghc").chain(args.iter().copied()))
}

fn json(out: &ghc_cli::Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn value(v: &Value) -> (f64, f64) {
    (v["value"]["lo"].as_f64().unwrap(), v["value"]["hi"].as_f64().unwrap())
}

#[test]
fn eval_prints_interval() {
    let out = ghc(&["eval", &fixture("abs_c"), "--at", "-2"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "[4, 10]\n");
    let out = ghc(&["eval", &fixture("abs_c"), "--at", "-2", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["value"]["lo"], 4.0);
    assert_eq!(v["value"]["hi"], 10.0);
}

#[test]
fn eval_error_codes() {
    assert_eq!(ghc(&["eval", &fixture("abs_c"), "--at", "11"]).code, EXIT_DOMAIN);
    assert_eq!(ghc(&["eval", &fixture("abs_c"), "--at", "1,2"]).code, EXIT_USAGE);
    assert_eq!(ghc(&["eval", &fixture("abs_c"), "--at", "x"]).code, EXIT_USAGE);
    assert_eq!(ghc(&["eval", &fixture("abs_c")]).code, EXIT_USAGE);
    assert_eq!(ghc(&["eval", "/nonexistent.ivf", "--at", "0"]).code, EXIT_USAGE);
    assert_eq!(ghc(&["eval", &fixture("abs_c"), "--at", "0", "--frobnicate"]).code, EXIT_USAGE);
}

#[test]
fn malformed_file_reports_position() {
    let dir = std::env::temp_dir().join(format!("ghc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.ivf");
    std::fs::write(&path, "ivf {\n  dom: [0,1];\n  scale: x1 +;\n  c: [1,2]\n}\n").unwrap();
    let out = ghc(&["eval", path.to_str().unwrap(), "--at", "0.5"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("3:"), "{}", out.stderr);
}

#[test]
fn clarke_of_abs() {
    let out = ghc(&["clarke", &fixture("abs_c"), "--at", "0", "--dir", "1"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["kind"], "upper_clarke");
    assert_eq!(v["exists"], true);
    let (lo, hi) = value(&v);
    assert!((lo - 2.0).abs() <= 1e-3 && (hi - 5.0).abs() <= 1e-3);

    // the lower derivative is −F_C(x̄)(−h) = −[2,5]
    let out = ghc(&["clarke", &fixture("abs_c"), "--at", "0", "--dir", "1", "--lower"]);
    let (lo, hi) = value(&json(&out));
    assert!((lo + 5.0).abs() <= 1e-3 && (hi + 2.0).abs() <= 1e-3);
}

#[test]
fn directional_existence_sets_exit_code() {
    let out = ghc(&["dirderiv", &fixture("quadrant_blowup"), "--at", "0,0", "--dir", "1,1"]);
    assert_eq!(out.code, EXIT_OK);
    let (lo, hi) = value(&json(&out));
    assert!((lo - 3.0).abs() <= 1e-3 && (hi - 8.0).abs() <= 1e-3);
    assert!(out.stderr.contains("boundary"));

    let out = ghc(&["dirderiv", &fixture("removable_jump"), "--at", "0", "--dir", "1"]);
    assert_eq!(out.code, EXIT_NONEXISTENT);
    let v = json(&out);
    assert_eq!(v["exists"], false);
    assert_eq!(v["verdict"], "divergent");

    let out = ghc(&["dirderiv", &fixture("constant"), "--at", "0,0", "--dir", "1,-1"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&json(&out)), (0.0, 0.0));
}

#[test]
fn text_format_uses_nine_digits() {
    let out = ghc(&["dirderiv", &fixture("square"), "--at", "0.3", "--dir", "1", "--format", "text"]);
    assert_eq!(out.code, EXIT_OK);
    let first = out.stdout.lines().next().unwrap();
    assert!(first.starts_with("gH-directional derivative: ["), "{first}");
}

#[test]
fn checks_and_replay() {
    let out = ghc(&["check", "sublinear", &fixture("abs_sublinear")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["holds"], true);

    let out = ghc(&["check", "convex", &fixture("abs_mixed_sign")]);
    assert_eq!(out.code, EXIT_VIOLATION);
    let verdict = json(&out);
    assert_eq!(verdict["holds"], false);
    let payload = verdict["counterexample"].to_string();
    let out = ghc(&["check", "convex", &fixture("abs_mixed_sign"), "--replay", &payload]);
    assert_eq!(out.code, EXIT_VIOLATION);
    assert_eq!(json(&out)["reproduced"], true);
    // the same pair is no counterexample for the convex fixture
    let out = ghc(&["check", "convex", &fixture("abs_sublinear"), "--replay", &payload]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["reproduced"], false);

    let out = ghc(&["check", "lipschitz", &fixture("sqrt")]);
    assert_eq!(out.code, EXIT_VIOLATION);
    assert_eq!(json(&out)["is_lipschitz_likely"], false);

    let out = ghc(&["check", "continuous", &fixture("sqrt"), "--at", "4"]);
    assert_eq!(out.code, EXIT_OK);

    let out = ghc(&["check", "sublinear", &fixture("sqrt")]);
    assert_eq!(out.code, EXIT_DOMAIN);
}

#[test]
fn seed_flag_and_env_agree() {
    let args = ["check", "convex", &fixture("abs_mixed_sign"), "--seed", "7"];
    let a = ghc(&args);
    let b = ghc(&args);
    assert_eq!(a, b);
    let bin = env!("CARGO_BIN_EXE_ghc");
    let env_run = Command::new(bin)
        .args(["check", "convex", &fixture("abs_mixed_sign")])
        .env("GHC_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env_run.stdout).unwrap(), a.stdout);
    // --seed wins over the environment
    let both = Command::new(bin)
        .args(["check", "convex", &fixture("abs_mixed_sign"), "--seed", "7"])
        .env("GHC_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(both.stdout).unwrap(), a.stdout);
    assert_eq!(env_run.status.code(), Some(EXIT_VIOLATION));
}

#[test]
fn reproduce_exact_scenarios() {
    let out = ghc(&["reproduce", "remark-2-1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.ends_with("remark-2-1: PASS\n"));
    let out = ghc(&["reproduce", "example-abs-clarke", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(ghc(&["reproduce", "remark-9-9"]).code, EXIT_USAGE);
}

#[test]
fn reproduce_failure_exits_five() {
    // the Clarke value at the removable jump comes out as [3,4], not [2,4]
    let out = ghc(&["reproduce", "remark-3-3", "--format", "json"]);
    let v = json(&out);
    assert_eq!(out.code, if v["passed"] == true { EXIT_OK } else { EXIT_VIOLATION });
    assert_eq!(v["rows"][1]["passed"], true);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ghc");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["eval", &fixture("abs_c"), "--at", "-2"]), Some(EXIT_OK));
    assert_eq!(status(&["eval", &fixture("abs_c"), "--at", "50"]), Some(EXIT_DOMAIN));
    assert_eq!(status(&["clarke", &fixture("abs_c")]), Some(EXIT_USAGE));
    assert_eq!(status(&["--help"]), Some(EXIT_OK));
}
