//! `sparsekit gen | solve | check | bench`
//!
//! Exit codes: 0 success or stationary, 1 not stationary, 2 usage or
//! validation error, 3 iteration limit, 4 stalled line search.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndarray::Array1;
use serde::Deserialize;

use sparsekit::bench::{self, ExperimentSpec, MRule, RunOptions, SRule, DEFAULT_TRACE_LEN, DEFAULT_TRIALS};
use sparsekit::optimality::{stationarity_report, DEFAULT_TOL};
use sparsekit::solvers::{SolveResult, SolverConfig, SolverKind, Status, StepPolicy};
use sparsekit::{Error, ProblemInstance};

#[derive(Parser)]
#[command(name = "sparsekit", version, about = "Sparse least squares: generate, solve, certify, benchmark")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded Gaussian instance and write it as JSON.
    Gen(GenArgs),
    /// Run one solver on an instance file.
    Solve(SolveArgs),
    /// Print the stationarity report of a point.
    Check(CheckArgs),
    /// Run a multi-trial experiment and write CSVs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    nonneg: bool,
    #[arg(long, default_value_t = 0.0)]
    sigma0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "gspa")]
    algo: SolverKind,
    /// `adaptive`, `lipschitz` (0.99/l_r) or a fixed step.
    #[arg(long, default_value = "adaptive")]
    alpha0: String,
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    #[arg(long, default_value_t = 1e-5)]
    sigma: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// JSON array, or a solve output with `x_final`.
    #[arg(long)]
    x: PathBuf,
    /// Defaults to the last step of a solve output, else 1.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment JSON; inline flags are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// `half`, `quarter` or an explicit M.
    #[arg(long, default_value = "quarter")]
    m: String,
    /// `pct1`, `pct5` or an explicit s.
    #[arg(long, default_value = "pct5")]
    s: String,
    #[arg(long)]
    nonneg: bool,
    #[arg(long, default_value_t = 0.0)]
    sigma0: f64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma separated; defaults to every solver valid for the model.
    #[arg(long, value_delimiter = ',')]
    solvers: Vec<SolverKind>,
    #[arg(long, default_value_t = DEFAULT_TRACE_LEN)]
    trace_len: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(2, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Check(a) => check(a),
        Command::Bench(a) => run_bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn gen(a: GenArgs) -> Result<u8, Failure> {
    let spec = ExperimentSpec {
        n: a.n,
        m_rule: MRule::Explicit(a.m),
        s_rule: SRule::Explicit(a.s),
        nonneg: a.nonneg,
        sigma0: a.sigma0,
        trials: 1,
        base_seed: a.seed,
        solvers: vec![SolverKind::Gspa],
    };
    bench::gen_instance(&spec, 0)?.save(&a.out)?;
    Ok(0)
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let inst = ProblemInstance::load(&a.input)?;
    let alpha0 = match a.alpha0.as_str() {
        "adaptive" => StepPolicy::Adaptive,
        "lipschitz" => StepPolicy::InverseLipschitz,
        v => StepPolicy::Fixed(
            v.parse()
                .map_err(|_| Failure(2, format!("--alpha0 expects 'adaptive', 'lipschitz' or a number, got '{v}'")))?,
        ),
    };
    let cfg = SolverConfig {
        alpha0,
        beta: a.beta,
        sigma: a.sigma,
        epsilon: a.eps,
        max_iter: a.max_iter,
        ..SolverConfig::for_instance(&inst)
    };
    let res = a.algo.solve(&inst, &cfg)?;
    if let Some(path) = &a.trace {
        res.trace.write_csv(std::io::BufWriter::new(std::fs::File::create(path).map_err(Error::from)?))?;
    }
    let json = serde_json::to_string_pretty(&res).map_err(Error::from)?;
    match &a.out {
        Some(path) => std::fs::write(path, json).map_err(Error::from)?,
        None => emit(&format!("{json}\n")),
    }
    eprintln!("{}: {} after {} iterations", a.algo, res.status.as_str(), res.iterations);
    Ok(match res.status {
        Status::ConvergedEpsilon | Status::ConvergedResidual => 0,
        Status::MaxIter => 3,
        Status::StalledBacktracking => 4,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointFile {
    Plain(Vec<f64>),
    Solved(SolveResult),
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    let inst = ProblemInstance::load(&a.input)?;
    let text = std::fs::read_to_string(&a.x).map_err(Error::from)?;
    let (x, last_alpha) = match serde_json::from_str::<PointFile>(&text)
        .map_err(|e| Failure(2, format!("{}: expected a JSON array or a solve output ({e})", a.x.display())))?
    {
        PointFile::Plain(v) => (Array1::from(v), None),
        PointFile::Solved(res) => {
            let alpha = res.final_alpha();
            (res.x_final, alpha)
        }
    };
    let alpha = a.alpha.or(last_alpha).unwrap_or(1.0);
    let report = stationarity_report(&inst, x.view(), alpha, a.tol)?;
    emit(&format!("{}\n", serde_json::to_string_pretty(&report).map_err(Error::from)?));
    Ok(if report.alpha_stationary { 0 } else { 1 })
}

fn parse_m(v: &str) -> Result<MRule, Failure> {
    match v {
        "half" => Ok(MRule::Half),
        "quarter" => Ok(MRule::Quarter),
        _ => v
            .parse()
            .map(MRule::Explicit)
            .map_err(|_| Failure(2, format!("--m expects 'half', 'quarter' or an integer, got '{v}'"))),
    }
}

fn parse_s(v: &str) -> Result<SRule, Failure> {
    match v {
        "pct1" => Ok(SRule::Pct1),
        "pct5" => Ok(SRule::Pct5),
        _ => v
            .parse()
            .map(SRule::Explicit)
            .map_err(|_| Failure(2, format!("--s expects 'pct1', 'pct5' or an integer, got '{v}'"))),
    }
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var("SPARSEKIT_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure(2, format!("SPARSEKIT_THREADS must be a nonnegative integer, got '{v}'"))),
    }
}

fn run_bench(a: BenchArgs) -> Result<u8, Failure> {
    let spec = match &a.spec {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path).map_err(Error::from)?).map_err(Error::from)?,
        None => ExperimentSpec {
            n: a.n,
            m_rule: parse_m(&a.m)?,
            s_rule: parse_s(&a.s)?,
            nonneg: a.nonneg,
            sigma0: a.sigma0,
            trials: a.trials,
            base_seed: a.seed,
            solvers: if a.solvers.is_empty() {
                SolverKind::ALL.into_iter().filter(|k| !a.nonneg || k.supports_nonneg()).collect()
            } else {
                a.solvers.clone()
            },
        },
    };
    spec.validate()?;
    if a.trace_len == 0 {
        return Err(Failure(2, "--trace-len must be at least 1".into()));
    }
    let opts = RunOptions {
        threads: threads_from_env()?,
        ..RunOptions::default()
    };
    let report = bench::run_experiment_with(&spec, &opts)?;
    report.write_all(&a.out_dir, a.trace_len)?;
    emit(&report.to_string());
    Ok(0)
}
