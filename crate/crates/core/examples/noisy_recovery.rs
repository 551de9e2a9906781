//! Recovery from noisy observations `b = A x + σ₀ e`. No method can fit the
//! noise exactly, so the residual settles near `σ₀ √(M − s)` and the signal
//! error near the noise level.
//!
//! ```bash
//! cargo run --release --example noisy_recovery -- 1000 0.01
//! ```

use sparsekit::bench::{run_experiment, ExperimentSpec};
use sparsekit::solvers::SolverKind;

fn main() -> sparsekit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(1000, |a| a.parse().expect("N must be an integer"));
    let sigma0: f64 = args.next().map_or(0.01, |a| a.parse().expect("sigma0 must be a number"));
    let spec = ExperimentSpec {
        sigma0,
        solvers: SolverKind::ALL.to_vec(),
        ..ExperimentSpec::new(n)
    };
    let report = run_experiment(&spec)?;
    print!("{report}");
    let (m, s) = (spec.m() as f64, spec.s() as f64);
    println!("\nnoise norm sigma0*sqrt(M) = {:.4}, sigma0*sqrt(M - s) = {:.4}", sigma0 * m.sqrt(), sigma0 * (m - s).sqrt());
    Ok(())
}
