use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghc_core::checks::{check_gh_continuous_with, EXACT_SLACK};
use ghc_core::limit::{DEFAULT_SEED, DEFAULT_TOL};
use ghc_core::{
    check_convex, check_lipschitz, check_sublinear, directional, lower_clarke, parse_ivf, upper_clarke,
    CheckVerdict, Counterexample, DerivativeQuery, DerivativeResult, IntervalFn, Ivf, ScheduleOverrides,
};
use serde::Serialize;

use crate::error::{CliError, EXIT_NONEXISTENT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use crate::scenarios::{self, Settings, SCENARIOS};

const DEFAULT_TRIALS: usize = 2000;
const DEFAULT_LIPSCHITZ_TRIALS: usize = 20_000;

#[derive(Debug, Parser)]
#[command(name = "ghc", version, about = "gH-difference interval calculus: derivatives and property checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Base point x̄, comma separated
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Direction h, comma separated
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dir: Option<String>,
    /// Convergence tolerance; for `check sublinear` the exactness slack (default 1e-9)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Initial ball radius
    #[arg(long, global = true)]
    pub delta0: Option<f64>,
    /// Radius shrink factor per level
    #[arg(long, global = true)]
    pub ratio: Option<f64>,
    /// Maximum number of levels
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Sample points per level
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Step samples per level for Clarke estimates
    #[arg(long, global = true)]
    pub lambda_samples: Option<usize>,
    #[arg(long, global = true, env = "GHC_SEED")]
    pub seed: Option<u64>,
    /// Output format; eval and reproduce default to text, everything else to json
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Convex,
    Lipschitz,
    Continuous,
    Sublinear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F at --at
    Eval { file: PathBuf },
    /// Upper (or lower) gH-Clarke derivative at --at in direction --dir
    Clarke {
        file: PathBuf,
        #[arg(long)]
        lower: bool,
    },
    /// gH-directional derivative at --at in direction --dir
    Dirderiv { file: PathBuf },
    /// Sampled property check
    Check {
        property: Property,
        file: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        /// Replay a counterexample (JSON, or @path to a JSON file) instead of searching
        #[arg(long)]
        replay: Option<String>,
    },
    /// Run a named scenario and print a PASS/FAIL table
    Reproduce { name: String },
}

/// Everything a run produced; `main` prints it and exits with `code`.
#[derive(Debug, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn error(e: &CliError) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_USAGE }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    let mut warnings = String::new();
    match dispatch(&cli, &mut warnings) {
        Ok(mut out) => {
            out.stderr.insert_str(0, &warnings);
            out
        }
        Err(e) => {
            let mut out = Outcome::error(&e);
            out.stderr.insert_str(0, &warnings);
            out
        }
    }
}

fn dispatch(cli: &Cli, warnings: &mut String) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Eval { file } => {
            let f = load(file)?;
            let x = point(opts.at.as_deref(), "--at", &f)?;
            let value = f.eval(&x)?;
            let text = format!("{}\n", value.to_text());
            #[derive(Serialize)]
            struct Report<'a> {
                at: &'a [f64],
                value: ghc_core::Interval,
            }
            Ok(emit(opts, Format::Text, &Report { at: &x, value }, text, EXIT_OK))
        }
        Command::Clarke { file, lower } => {
            let f = load(file)?;
            let q = query(opts, &f, warnings)?;
            let r = if *lower { lower_clarke(&q)? } else { upper_clarke(&q)? };
            Ok(derivative_outcome(opts, &r))
        }
        Command::Dirderiv { file } => {
            let f = load(file)?;
            let q = query(opts, &f, warnings)?;
            Ok(derivative_outcome(opts, &directional(&q)?))
        }
        Command::Check { property, file, trials, replay } => {
            let f = load(file)?;
            if let Some(payload) = replay {
                return replay_outcome(opts, &f, payload);
            }
            let seed = seed(opts);
            match property {
                Property::Convex => {
                    let v = check_convex(&f, trials.unwrap_or(DEFAULT_TRIALS), seed);
                    Ok(verdict_outcome(opts, "convex", &v))
                }
                Property::Sublinear => {
                    let tol = opts.tol.unwrap_or(EXACT_SLACK);
                    let v = check_sublinear(&f, trials.unwrap_or(DEFAULT_TRIALS), seed, tol)?;
                    Ok(verdict_outcome(opts, "sublinear", &v))
                }
                Property::Continuous => {
                    let x = point(opts.at.as_deref(), "--at", &f)?;
                    if !f.admits(&x) {
                        return Err(CliError::Domain(format!("point {x:?} is outside the domain")));
                    }
                    let sched = overrides(opts).apply(f.dims());
                    boundary_warning(&f, &x, sched.delta0, warnings);
                    let v = check_gh_continuous_with(&f, &x, opts.tol.unwrap_or(DEFAULT_TOL), &sched)?;
                    Ok(verdict_outcome(opts, "gH-continuous", &v))
                }
                Property::Lipschitz => {
                    let trials = trials.unwrap_or(DEFAULT_LIPSCHITZ_TRIALS);
                    let r = check_lipschitz(&f, f.domain(), trials, seed)?;
                    let text = format!(
                        "gH-Lipschitz: {}\nK′ estimate: {}\nlog-log slope: {}\nsamples: {}\n",
                        if r.is_lipschitz_likely { "likely" } else { "not likely" },
                        ghc_core::interval::format_sig9(r.k_estimate),
                        ghc_core::interval::format_sig9(r.slope),
                        r.samples
                    );
                    let code = if r.is_lipschitz_likely { EXIT_OK } else { EXIT_VIOLATION };
                    Ok(emit(opts, Format::Json, &r, text, code))
                }
            }
        }
        Command::Reproduce { name } => {
            let settings = Settings {
                tol: opts.tol.unwrap_or(DEFAULT_TOL),
                seed: seed(opts),
                overrides: overrides(opts),
            };
            let scenario = scenarios::reproduce(name, &settings).ok_or_else(|| {
                CliError::Usage(format!("unknown scenario {name:?}; expected one of {}", SCENARIOS.join(", ")))
            })?;
            let code = if scenario.passed { EXIT_OK } else { EXIT_VIOLATION };
            Ok(emit(opts, Format::Text, &scenario, scenario.to_text(), code))
        }
    }
}

fn emit<T: Serialize>(opts: &Options, default: Format, value: &T, text: String, code: i32) -> Outcome {
    let stdout = match opts.format.unwrap_or(default) {
        Format::Text => text,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")),
    };
    Outcome { stdout, stderr: String::new(), code }
}

fn load(path: &Path) -> Result<Ivf, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{shown}: {e}")))?;
    parse_ivf(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn parse_list(raw: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Usage(format!("{flag}: {s:?} is not a finite number"))),
            }
        })
        .collect()
}

fn point(raw: Option<&str>, flag: &str, f: &Ivf) -> Result<Vec<f64>, CliError> {
    let raw = raw.ok_or_else(|| CliError::Usage(format!("{flag} is required")))?;
    let v = parse_list(raw, flag)?;
    if v.len() != f.dims() {
        return Err(CliError::Usage(format!(
            "{flag} has {} components but the function takes {}",
            v.len(),
            f.dims()
        )));
    }
    Ok(v)
}

fn seed(opts: &Options) -> u64 {
    opts.seed.unwrap_or(DEFAULT_SEED)
}

fn overrides(opts: &Options) -> ScheduleOverrides {
    ScheduleOverrides {
        delta0: opts.delta0,
        ratio: opts.ratio,
        max_levels: opts.levels,
        min_levels: None,
        samples_per_level: opts.samples,
        lambda_samples: opts.lambda_samples,
        seed: Some(seed(opts)),
    }
}

fn boundary_warning(f: &Ivf, x: &[f64], delta0: f64, warnings: &mut String) {
    let d = f.domain().boundary_distance(x);
    if d < delta0 {
        warnings.push_str(&format!(
            "warning: x̄ is {} from the domain boundary, inside the initial radius {}; only the admissible part of each ball is sampled\n",
            ghc_core::interval::format_sig9(d),
            ghc_core::interval::format_sig9(delta0)
        ));
    }
}

fn query<'a>(opts: &Options, f: &'a Ivf, warnings: &mut String) -> Result<DerivativeQuery<'a, Ivf>, CliError> {
    let x = point(opts.at.as_deref(), "--at", f)?;
    let h = point(opts.dir.as_deref(), "--dir", f)?;
    if !f.admits(&x) {
        return Err(CliError::Domain(format!("point {x:?} is outside the domain")));
    }
    let sched = overrides(opts).apply(f.dims());
    boundary_warning(f, &x, sched.delta0, warnings);
    Ok(DerivativeQuery::new(f, &x, &h)
        .with_schedule(sched)
        .with_tol(opts.tol.unwrap_or(DEFAULT_TOL)))
}

fn derivative_outcome(opts: &Options, r: &DerivativeResult) -> Outcome {
    let verdict = serde_json::to_value(r.estimate.verdict).expect("verdict");
    let mut text = format!(
        "{}: {}\nexists: {}\nverdict: {}\nlevels: {}\n",
        r.kind.describe(),
        r.value.to_text(),
        r.exists,
        verdict.as_str().unwrap_or_default(),
        r.estimate.levels()
    );
    if r.estimate.residual.is_finite() {
        text.push_str(&format!("residual: {}\n", ghc_core::interval::format_sig9(r.estimate.residual)));
    }
    let code = if r.exists { EXIT_OK } else { EXIT_NONEXISTENT };
    emit(opts, Format::Json, r, text, code)
}

fn verdict_outcome(opts: &Options, property: &str, v: &CheckVerdict) -> Outcome {
    let mut text = format!("{property}: {}\ntrials: {}\n", if v.holds { "holds" } else { "fails" }, v.trials);
    if let Some(strong) = v.stronger_form {
        text.push_str(&format!("stronger subadditivity: {}\n", if strong { "holds" } else { "fails" }));
    }
    if let Some(c) = &v.counterexample {
        text.push_str(&format!("counterexample: {}\n", serde_json::to_string(c).expect("counterexample")));
    }
    let code = if v.holds { EXIT_OK } else { EXIT_VIOLATION };
    emit(opts, Format::Json, v, text, code)
}

fn replay_outcome(opts: &Options, f: &Ivf, payload: &str) -> Result<Outcome, CliError> {
    let json = match payload.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?,
        None => payload.to_string(),
    };
    // accept a bare counterexample or a whole verdict
    let c: Counterexample = match serde_json::from_str::<CheckVerdict>(&json) {
        Ok(CheckVerdict { counterexample: Some(c), .. }) => c,
        Ok(_) => return Err(CliError::Usage("verdict carries no counterexample".into())),
        Err(_) => serde_json::from_str(&json).map_err(|e| CliError::Usage(format!("--replay: {e}")))?,
    };
    let reproduced = c.replay(f)?;
    #[derive(Serialize)]
    struct Report<'a> {
        reproduced: bool,
        counterexample: &'a Counterexample,
    }
    let text = format!("counterexample {}\n", if reproduced { "reproduced" } else { "not reproduced" });
    let code = if reproduced { EXIT_VIOLATION } else { EXIT_OK };
    Ok(emit(opts, Format::Json, &Report { reproduced, counterexample: &c }, text, code))
}
