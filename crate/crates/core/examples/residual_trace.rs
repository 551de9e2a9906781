//! Mean residual per iteration, the data behind a convergence plot. Writes
//! `trace.csv`, `results.csv` and `aggregate.csv` when given a directory.
//!
//! ```bash
//! cargo run --release --example residual_trace
//! cargo run --release --example residual_trace -- out/
//! ```

use sparsekit::bench::{run_experiment, ExperimentSpec, DEFAULT_TRACE_LEN};
use sparsekit::solvers::SolverKind;

fn main() -> sparsekit::Result<()> {
    let spec = ExperimentSpec {
        solvers: SolverKind::ALL.to_vec(),
        ..ExperimentSpec::new(1000)
    };
    let report = run_experiment(&spec)?;
    let table = report.trace_table(DEFAULT_TRACE_LEN);

    print!("{:>4}", "k");
    for k in &spec.solvers {
        print!(" {:>11}", k.name());
    }
    println!();
    for step in [1, 2, 5, 10, 20, 30, 40, 50, 60, 80, 100] {
        print!("{step:>4}");
        for solver in &spec.solvers {
            let row = table.iter().find(|r| r.solver == *solver && r.k == step).unwrap();
            print!(" {:>11.3e}", row.mean_residual);
        }
        println!();
    }

    if let Some(dir) = std::env::args().nth(1) {
        report.write_all(&dir, DEFAULT_TRACE_LEN)?;
        println!("\nwrote CSVs to {dir}");
    }
    Ok(())
}
