//! Noiseless recovery with every solver, following the reference protocol:
//! Gaussian `A` with `M = N/4`, `s = 5% of N`, 40 trials.
//!
//! ```bash
//! cargo run --release --example recovery          # N = 1000
//! cargo run --release --example recovery -- 400   # smaller
//! ```

use sparsekit::bench::{run_experiment, ExperimentSpec};
use sparsekit::solvers::SolverKind;

fn main() -> sparsekit::Result<()> {
    let n = std::env::args().nth(1).map_or(1000, |a| a.parse().expect("N must be an integer"));
    let spec = ExperimentSpec {
        solvers: SolverKind::ALL.to_vec(),
        ..ExperimentSpec::new(n)
    };
    let report = run_experiment(&spec)?;
    print!("{report}");

    let wall = |k| report.row(k).map_or(f64::NAN, |r| r.mean_wall_ms);
    println!("\nwall time relative to GSPA:");
    for k in SolverKind::ALL {
        println!("  {k:<5} {:.2}", wall(k) / wall(SolverKind::Gspa));
    }
    Ok(())
}
