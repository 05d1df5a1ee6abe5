//! The `growthlift` command line.
//!
//! Exit codes: 0 success, 1 usage or input error (or a failed check),
//! 2 iteration budget exhausted. `GROWTHLIFT_SEED` sets the default seed for
//! problems and the acceptance suite (0 when unset). Output is deterministic
//! unless `--timestamp` is given.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use growthlift_core::bounds::{BoundKind, BoundParams, Lift, RateBound};
use growthlift_core::problems::{ProblemInstance, ProblemSpec};
use growthlift_core::solvers::{Method, SolverConfig, Termination};
use growthlift_core::Point;
use serde::Serialize;

use crate::acceptance::{self, CriterionResult};
use crate::error::{invalid, Result};
use crate::harness::{
    bound_params, check_equivalence, check_higher_equivalence, matching_bound, run_instance,
    ExperimentSpec,
};
use crate::io;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "GROWTHLIFT_SEED";

#[derive(Debug, Parser)]
#[command(name = "growthlift", version, about = "First-order methods under growth conditions and lifting")]
struct Cli {
    /// Print a timestamp line before the output.
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a method on a problem and write its trace.
    Solve(SolveArgs),
    /// Evaluate an iteration bound, optionally lifted.
    Bounds(BoundsArgs),
    /// Compare runs on a function and on its lifted counterpart.
    LiftCheck(LiftCheckArgs),
    /// Observed iterations to each accuracy next to the matching bound.
    Bench(BenchArgs),
    /// Run the acceptance suite and print a JSON summary.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Problem spec (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// prox, polyak, bundle-mc or bundle-agg.
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Prox stepsize or bundle penalty; required for prox and bundle methods.
    #[arg(long)]
    rho: Option<f64>,
    /// Bundle descent parameter.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Iteration budget.
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Starting point as comma-separated coordinates; all ones by default.
    #[arg(long)]
    x0: Option<String>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Target accuracy.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Bundle model-gap stopping tolerance.
    #[arg(long, default_value_t = 0.0)]
    eps_stop: f64,
    /// Trace CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Also write the experiment spec (JSON).
    #[arg(long)]
    spec_out: Option<PathBuf>,
    /// Also write the runtime check reports (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Bound name, e.g. k_prox_sharp.
    #[arg(long)]
    name: String,
    /// Bound parameters (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Lift to apply, `general:p` or `higher:p,q`; repeat to compose.
    #[arg(long = "lift")]
    lifts: Vec<String>,
}

#[derive(Debug, Args)]
struct LiftCheckArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Target accuracy.
    #[arg(long)]
    eps: f64,
    /// Exponent of the lifted floor.
    #[arg(long)]
    p: f64,
    /// Growth exponent of the base problem; selects higher-order lifting.
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Strictly decreasing targets, comma-separated.
    #[arg(long, default_value = "1e-2,1e-4,1e-6")]
    eps: String,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Run only these criterion ids.
    #[arg(long)]
    only: Vec<u32>,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|_| format!("unknown method `{s}`; expected prox, polyak, bundle-mc or bundle-agg"))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let _ = writeln!(out, "timestamp: {secs}");
    }
    let result = match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::LiftCheck(a) => lift_check(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Validate(a) => validate(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid("GROWTHLIFT_SEED", format!("`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn write_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> crate::Error + '_ {
    move |source| crate::Error::Io {
        path: path.to_owned(),
        source,
    }
}

struct Prepared {
    spec: ProblemSpec,
    problem: ProblemInstance,
    config: SolverConfig,
    x0: Point,
}

fn prepare(run: &RunArgs) -> Result<Prepared> {
    let spec: ProblemSpec = io::read_json(&run.problem)?;
    let problem = spec.build(default_seed()?)?;
    let rho = match run.rho {
        Some(r) => r,
        None if run.method == Method::Polyak => SolverConfig::default().rho,
        None => return Err(invalid("rho", format!("--rho is required for {}", run.method))),
    };
    let config = SolverConfig {
        rho,
        beta: run.beta,
        max_iter: run.max_iter,
        ..Default::default()
    };
    let x0 = match &run.x0 {
        Some(s) => {
            let coords = parse_list(s, "x0")?;
            if coords.len() != problem.dim() {
                return Err(invalid("x0", format!("has {} coordinates, problem has {}", coords.len(), problem.dim())));
            }
            Point::new(coords)?
        }
        None => Point::new(vec![1.0; problem.dim()])?,
    };
    Ok(Prepared {
        spec,
        problem,
        config,
        x0,
    })
}

fn parse_list(s: &str, field: &'static str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| invalid(field, format!("`{t}` is not a number"))))
        .collect()
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let Prepared {
        spec,
        problem,
        config,
        x0,
    } = prepare(&a.run)?;
    let config = SolverConfig {
        eps_stop: a.eps_stop,
        ..config
    };
    let experiment = ExperimentSpec {
        problem: spec,
        method: a.run.method,
        config: SolverConfig {
            target_eps: a.eps,
            ..config
        },
        x0: x0.to_vec(),
        eps_list: vec![a.eps],
        checks: Vec::new(),
    };
    let outcome = run_instance(&problem, a.run.method, &config, &x0, &[a.eps], &[])?;
    io::write_trace_file(&outcome.trace, &a.out)?;
    if let Some(path) = &a.spec_out {
        io::write_json(path, &experiment)?;
    }
    if let Some(path) = &a.report {
        io::write_json(path, &outcome.reports)?;
    }
    let last = outcome.trace.last();
    let w = write_err(&a.out);
    (|| -> std::io::Result<()> {
        writeln!(out, "termination: {}", outcome.trace.termination.name())?;
        writeln!(out, "iterations: {}", last.k)?;
        writeln!(out, "final gap: {:e}", last.gap)?;
        if a.report.is_some() {
            let failed: Vec<&str> = outcome.reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
            if failed.is_empty() {
                writeln!(out, "checks: all passed")?;
            } else {
                writeln!(out, "checks: failed {}", failed.join(", "))?;
            }
        }
        Ok(())
    })()
    .map_err(w)?;
    Ok(match outcome.trace.termination {
        Termination::MaxIter => 2,
        _ => 0,
    })
}

/// Rounds to 12 significant digits so that values like `1999.9999999999995`
/// print as `2000`.
fn display(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    rounded.to_string()
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    let kind: BoundKind = a.name.parse()?;
    let params: BoundParams = io::read_json(&a.params)?;
    let base = RateBound::new(kind);
    let value = base.evaluate(&params)?;
    let mut lines = vec![format!("{} = {}", base.name(), display(value))];
    if !a.lifts.is_empty() {
        let mut lifted = base;
        for l in &a.lifts {
            lifted = lifted.lift(l.parse::<Lift>()?)?;
        }
        lines.push(format!("{} = {}", lifted.name(), display(lifted.evaluate(&params)?)));
    }
    let text = lines.join("\n") + "\n";
    out.write_all(text.as_bytes()).map_err(write_err(&a.params))?;
    Ok(0)
}

fn lift_check(a: LiftCheckArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(q) = a.q {
        if !(a.p < q) {
            return Err(invalid("p", format!("higher-order lifting requires p < q, got p={} q={q}", a.p)));
        }
    }
    let prep = prepare(&a.run)?;
    let report = match a.q {
        Some(q) => {
            let cert = prep.problem.growth().ok_or_else(|| invalid("q", "problem has no growth certificate"))?;
            if cert.exponent != q {
                return Err(invalid("q", format!("problem growth exponent is {}, not {q}", cert.exponent)));
            }
            check_higher_equivalence(&prep.problem, a.run.method, &prep.config, &prep.x0, a.eps, a.p)?
        }
        None => check_equivalence(&prep.problem, a.run.method, &prep.config, &prep.x0, a.eps, a.p)?,
    };
    let passed = report.passed();
    let opt = |v: Option<usize>| v.map_or("none".to_string(), |k| k.to_string());
    let mut text = format!(
        "{}\nmeasured D: {:e}\ncoefficient: {:e}\nhorizon: {}\nfirst divergence: {}\nbitwise identical: {}\n",
        if passed { "PASS" } else { "FAIL" },
        report.measured_d,
        report.coefficient,
        opt(report.horizon),
        opt(report.first_divergence),
        report.bitwise_identical,
    );
    if report.excused_at_horizon {
        text.push_str("implicit step at the horizon not compared: G > F there\n");
    }
    if let Some(split) = &report.case_split {
        text.push_str(&format!("case split: {} ({})\n", if split.passed { "PASS" } else { "FAIL" }, split.detail));
    }
    out.write_all(text.as_bytes()).map_err(write_err(&a.run.problem))?;
    Ok(if passed { 0 } else { 1 })
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let eps_list = parse_list(&a.eps, "eps")?;
    let prep = prepare(&a.run)?;
    let outcome = run_instance(&prep.problem, a.run.method, &prep.config, &prep.x0, &eps_list, &[])?;
    let bound = matching_bound(a.run.method, prep.problem.growth());
    let params = bound_params(&outcome.trace, &prep.problem, &prep.config);
    let mut text = format!(
        "bound: {}\n{:>10} {:>10} {:>14}\n",
        bound.as_ref().map_or("none".to_string(), |b| b.name()),
        "eps",
        "observed",
        "bound"
    );
    for &eps in &eps_list {
        let observed = outcome.trace.first_eps_index(eps).map_or("-".to_string(), |k| k.to_string());
        let value = match &bound {
            Some(b) => b
                .evaluate(&BoundParams {
                    epsilon: Some(eps),
                    ..params
                })
                .map_or_else(|e| format!("({e})"), |v| display(v.ceil())),
            None => "-".to_string(),
        };
        text.push_str(&format!("{eps:>10e} {observed:>10} {value:>14}\n"));
    }
    out.write_all(text.as_bytes()).map_err(write_err(&a.run.problem))?;
    Ok(match outcome.trace.termination {
        Termination::MaxIter => 2,
        _ => 0,
    })
}

#[derive(Serialize)]
struct ValidateSummary<'a> {
    passed: bool,
    seed: u64,
    criteria: &'a [CriterionResult],
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let seed = default_seed()?;
    let results = if a.only.is_empty() {
        acceptance::run_all(seed)
    } else {
        acceptance::run_selected(&a.only, seed)?
    };
    let passed = results.iter().all(|r| r.passed);
    let summary = ValidateSummary {
        passed,
        seed,
        criteria: &results,
    };
    out.write_all(io::to_canonical_json(&summary).as_bytes())
        .map_err(write_err(std::path::Path::new("<stdout>")))?;
    Ok(if passed { 0 } else { 1 })
}
